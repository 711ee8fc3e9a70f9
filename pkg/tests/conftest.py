import json

import pytest

import gasketfif as gf


@pytest.fixture(scope="session")
def ref03():
    return gf.reference_model(0.3)


@pytest.fixture(scope="session")
def ref05():
    return gf.reference_model(0.5)


@pytest.fixture(scope="session")
def ref07():
    return gf.reference_model(0.7)


@pytest.fixture(scope="session")
def zero03():
    return gf.zero_model(0.3)


def config_dict(n=1, alpha=0.3, data=None):
    """A complete CLI config; data defaults to the single-bump set."""
    if data is None:
        ds = gf.bump_dataset(n)
        data = [
            {"first": str(k.first), "second": str(k.second), "z": z}
            for k, z in sorted(ds.entries.items(), key=lambda kv: str(kv[0]))
        ]
    return {"n": n, "scaling": {"constant": alpha}, "data": data}


def write_config(tmp_path, cfg, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)

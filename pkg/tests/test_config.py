import pytest

from qgrade import InputError, RingConfig, default_shots, detection_site


def test_defaults():
    cfg = RingConfig(L=6)
    assert cfg.J == 1.0
    assert cfg.Gamma == 0.1
    assert cfg.gamma == 0.0
    assert cfg.twist_site == 0
    assert cfg.threshold == 0.2
    assert cfg.shots == 1000


def test_detection_site_is_diametrically_opposite():
    assert detection_site(6) == 3
    assert detection_site(12) == 6
    assert RingConfig(L=8).detection_site == 4


def test_default_shots_scale_with_ring_size():
    assert default_shots(16) == 1000
    assert default_shots(18) == 2000


@pytest.mark.parametrize("bad", [3, 5, 0, -4, 1])
def test_rejects_odd_or_tiny_rings(bad):
    with pytest.raises(InputError):
        RingConfig(L=bad)


def test_rejects_bad_couplings_and_rates():
    with pytest.raises(InputError):
        RingConfig(L=6, J=0.0)
    with pytest.raises(InputError):
        RingConfig(L=6, Gamma=-0.1)
    with pytest.raises(InputError):
        RingConfig(L=6, gamma=-1e-3)
    with pytest.raises(InputError):
        RingConfig(L=6, threshold=1.5)
    with pytest.raises(InputError):
        RingConfig(L=6, shots=-5)


def test_twist_is_pinned_to_bond_zero():
    with pytest.raises(InputError):
        RingConfig(L=6, twist_site=2)


def test_with_gamma_returns_modified_copy():
    cfg = RingConfig(L=6, gamma=0.01)
    quiet = cfg.with_gamma(0.0)
    assert quiet.gamma == 0.0
    assert cfg.gamma == 0.01
    assert quiet.L == cfg.L


def test_dict_round_trip():
    cfg = RingConfig(L=8, gamma=0.005, shots=1234)
    assert RingConfig.from_dict(cfg.to_dict()) == cfg

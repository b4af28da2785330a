import math

import pytest

import wco_spectra as wco


def half_chord():
    return wco.Weight.polynomial([0.5, -0.5])


def test_classify_power_map():
    c = wco.classify(wco.BlaschkeProduct.power(2))
    assert c["kind"] == "Elliptic"
    assert c["z0"] == [0.0, 0.0]


def test_blaschke_round_trip_and_unimodular():
    b = wco.BlaschkeProduct([0.3 + 0.2j, -0.4j], 0.5)
    assert b.degree == 2
    again = wco.BlaschkeProduct.from_dict(b.to_dict())
    assert again.zeros == b.zeros
    for k in range(16):
        z = complex(math.cos(0.4 * k), math.sin(0.4 * k))
        assert abs(abs(b(z)) - 1.0) < 1e-12


def test_spectral_radius_half_chord():
    r = wco.spectral_radius(half_chord(), degree=2, max_period=12)
    assert r["rho_lower"] == pytest.approx(math.sin(math.pi / 3), abs=1e-9)
    assert sorted(r["orbit"]["points"]) == ["1/3", "2/3"]


def test_periodic_orbit_counts():
    pts = sum(o["period"] for o in wco.periodic_orbits(2, 6) if 6 % o["period"] == 0)
    assert pts == 2**6 - 1


def test_two_circle_example():
    weight, report = wco.build_t6([0.5, 1.0], degree=2, max_period=4)
    assert weight.modulus("1/2") == 0.0
    spec = wco.assemble_spectrum(weight, degree=2)
    assert spec["usf_radii"] == pytest.approx([0.5, 1.0], abs=2e-3)
    assert not spec["includes_zero"]
    assert report["spectrum"]["usf_radii"] == spec["usf_radii"]
    rejected = {round(p["radius"], 3) for p in spec["probes"] if p["verdict"] == "REJECT"}
    assert rejected == {0.25, 0.75}


def test_rotation_leaves_spectrum_unchanged():
    a = wco.assemble_spectrum(half_chord())
    b = wco.assemble_spectrum(half_chord().rotated(1.3))
    assert a == b


def test_scan_csv():
    weight, _ = wco.build_t6([0.5, 1.0], max_period=4)
    out = wco.scan(weight, [0.25, 0.5, 1.2], depth=10)
    assert out["csv"].splitlines()[0] == "radius,verdict,certificate_kind,depth,margin"
    assert [row["verdict"] for row in out["rows"]] == ["REJECT", "ACCEPT", "REJECT"]


def test_verify_example6():
    rep = wco.verify_example6(1, 2, grid=20000)
    assert rep["pass"]
    assert rep["step_a"]["max"] == pytest.approx(3 * math.sqrt(3) / 8, abs=1e-9)


def test_outer_from_modulus_half_chord():
    n = 1 << 12
    samples = [abs(math.sin(math.pi * j / n)) for j in range(n)]
    weight, doc = wco.outer_from_modulus(samples, [("0/1", 1)])
    assert doc["analyticity_ratio"] <= 1e-8
    c = [complex(*v) for v in doc["coeffs"]]
    phase = c[0].conjugate() / abs(c[0])
    assert abs(phase * c[0] - 0.5) < 1e-6
    assert abs(phase * c[1] + 0.5) < 1e-6
    assert weight.modulus("0/1") == 0.0


def test_weight_dict_round_trip():
    w = wco.Weight.from_dict({"coeffs": [[0.5, 0], [-0.5, 0]], "grid_M": 12})
    assert w.kind == "polynomial"
    assert w.to_dict()["coeffs"] == [[0.5, 0.0], [-0.5, 0.0]]


def test_annulus_hyperbolic():
    b = wco.BlaschkeProduct([-0.5, -0.5])
    rep = wco.annulus(b, wco.Weight.polynomial([0.75, 0.25]))
    assert rep["r_inner"] == pytest.approx(math.sqrt(0.4375), abs=1e-9)
    assert rep["endpoint_periods"] == [1, 1]


def test_errors_carry_codes():
    with pytest.raises(wco.WcoError, match="InvalidArgument"):
        wco.BlaschkeProduct([1.5])
    with pytest.raises(wco.WcoError, match="Unsupported"):
        wco.assemble_spectrum(half_chord(), blaschke=wco.BlaschkeProduct([-0.5, -0.5]))
    with pytest.raises(ValueError):
        wco.build_t6([0.6, 0.3])

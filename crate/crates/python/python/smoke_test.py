"""Smoke test for the cyclicpoly extension module.

Build and install first, e.g. ``maturin develop --release`` or
``pip install`` of a wheel from ``maturin build``, then run this file.
"""

import math

import cyclicpoly as cp


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    square = cp.CentralAngles([0.0, math.pi / 2, math.pi, 1.5 * math.pi])
    m = square.measure()
    assert all(close(s, math.sqrt(2)) for s in m.sides)
    assert all(close(a, math.pi / 2) for a in m.angles)
    assert close(m.area, 2.0) and close(m.omega, math.pi / 2)
    assert m.diagonals is not None and close(m.diagonals[0], 2.0)
    assert len(square) == 4 and close(sum(square.gaps()), 2 * math.pi)

    try:
        cp.CentralAngles([0.0, 1.0, 1.0])
    except ValueError:
        pass
    else:
        raise AssertionError("repeated vertex accepted")

    tri = cp.sample_polygon(3, seed=7)
    assert tri.n == 3
    assert close(sum(cp.measure(tri).angles), math.pi)
    assert cp.sample_polygon(5, 7).theta == cp.sample_polygon(5, 7).theta

    for poly in cp.sample_polygons(4, 200, seed=1):
        q = poly.measure()
        s = q.sides
        a, b, w = cp.angles_from_sides(s[1], s[2], s[3], s[0])
        assert close(a, q.angles[1], 1e-9) and close(b, q.angles[2], 1e-9) and close(w, q.omega, 1e-9)
        assert close(q.trig_area, q.area, 1e-10)

    assert close(cp.third_side_triangle(2.0, 1.0, "plus"), math.sqrt(3))

    names = cp.density_names()
    assert {"side", "tent", "triangle_area", "quad_angles"} <= set(names)
    assert close(cp.pdf("side", 0.0), 3 / (2 * math.pi))
    assert close(cp.pdf("tent", [math.pi / 2, math.pi / 2]), 3 / math.pi**2)
    assert close(cp.cdf("angle", math.pi / 2), 0.5, 1e-9)
    value, _, tail = cp.density_moment("triangle_area", 1)
    assert close(value, 3 / (2 * math.pi), 1e-6) and 0 < tail < 1e-6
    try:
        cp.pdf("nonesuch", 1.0)
    except KeyError:
        pass
    else:
        raise AssertionError("unknown density accepted")

    moments = {m["id"]: m["value"] for m in cp.moments()}
    assert close(moments["SIDE_MEAN"], 6 / math.pi - 24 / math.pi**3)
    assert close(cp.closed_form_moment("QUAD_AREA_MEAN"), 3 / math.pi)

    claims = {c["id"]: c for c in cp.list_claims()}
    assert claims["HEX_RHO_ADJ"]["conjecture"] and not claims["SIDE_MEAN"]["conjecture"]

    r = cp.run_claim("SIDE_MEAN", 100_000, seed=3, record_timing=False)
    assert r["pass"] and r["kind"] == "moment" and r["elapsed_seconds"] == 0.0
    assert r == cp.run_claim("SIDE_MEAN", 100_000, seed=3, workers=2, record_timing=False) | {"workers": 1}
    r = cp.run_claim("TRI_AREA_MEAN", 50_000)
    assert "flat-tail" in r["notes"]

    print(f"cyclicpoly smoke test passed ({len(names)} densities, {len(claims)} claims)")


if __name__ == "__main__":
    main()

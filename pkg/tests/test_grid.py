import numpy as np
import pytest

from allen_cahn_mp import (DomainNotConnectedError, InvalidArgumentError, VectorField,
                           boundary_radius, build_box_domain, build_masked_domain, set_boundary)
from allen_cahn_mp.grid import (BOUNDARY, INTERIOR, OUTSIDE, boundary_from_csv, load_mask_file,
                                read_field_csv, save_mask_file, write_field_csv)


def flood_fill_components(mask):
    """Independent oracle: count axis-connected components by explicit BFS."""
    mask = np.atleast_2d(mask)
    seen = np.zeros_like(mask, dtype=bool)
    count = 0
    for start in zip(*np.nonzero(mask)):
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = True
        while stack:
            i, j = stack.pop()
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                p = (i + di, j + dj)
                if 0 <= p[0] < mask.shape[0] and 0 <= p[1] < mask.shape[1] and mask[p] and not seen[p]:
                    seen[p] = True
                    stack.append(p)
    return count


def boundary_ring_oracle(mask):
    mask = np.atleast_2d(mask)
    out = np.zeros_like(mask, dtype=bool)
    for i, j in zip(*np.nonzero(mask)):
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            p = (i + di, j + dj)
            if not (0 <= p[0] < mask.shape[0] and 0 <= p[1] < mask.shape[1]) or not mask[p]:
                out[i, j] = True
    return out


def test_box_1d_counts():
    d = build_box_domain(1, [1.0], 0.25)
    assert d.shape == (5,)
    assert len(d.boundary) == 2 and len(d.interior) == 3


def test_box_2d_counts():
    d = build_box_domain(2, [1.0, 1.0], 0.5)
    assert d.shape == (3, 3)
    assert len(d.boundary) == 8 and len(d.interior) == 1


def test_box_too_few_nodes():
    with pytest.raises(InvalidArgumentError):
        build_box_domain(1, [1.0], 0.6)


def test_box_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        build_box_domain(3, [1, 1, 1], 0.1)
    with pytest.raises(InvalidArgumentError):
        build_box_domain(2, [1.0, -1.0], 0.1)


def l_shape(k=9):
    mask = np.ones((k, k), dtype=bool)
    mask[: k // 2, : k // 2] = False
    return mask


def test_l_shaped_domain_matches_oracle():
    mask = l_shape()
    d = build_masked_domain(mask, 0.1)
    np.testing.assert_array_equal(d.kind == BOUNDARY, boundary_ring_oracle(mask))
    np.testing.assert_array_equal(d.kind == OUTSIDE, ~mask)
    assert flood_fill_components(d.kind == INTERIOR) == 1


def test_two_squares_not_connected():
    mask = np.zeros((5, 11), dtype=bool)
    mask[:, :5] = True
    mask[:, 6:] = True
    assert flood_fill_components(mask) == 2
    with pytest.raises(DomainNotConnectedError):
        build_masked_domain(mask, 0.1)


def test_empty_mask():
    with pytest.raises(InvalidArgumentError):
        build_masked_domain(np.zeros((4, 4), dtype=bool), 0.1)


def test_mask_without_interior():
    with pytest.raises(InvalidArgumentError):
        build_masked_domain(np.ones((2, 5), dtype=bool), 0.1)


@pytest.mark.parametrize("n,ext", [(1, [1.0]), (2, [1.0, 0.5]), (2, [0.75, 1.0])])
def test_masked_box_equals_box(n, ext):
    box = build_box_domain(n, ext, 0.125)
    masked = build_masked_domain(box.kind != OUTSIDE, 0.125)
    np.testing.assert_array_equal(box.kind, masked.kind)


@pytest.mark.parametrize("mask", [l_shape(), l_shape(12), np.ones(7, dtype=bool)])
def test_interior_neighbors_are_in_set(mask):
    d = build_masked_domain(mask, 0.1)
    padded = np.pad(d.kind, 1, constant_values=OUTSIDE)
    for idx in zip(*np.nonzero(d.kind == INTERIOR)):
        count = 0
        for ax in range(d.n):
            for step in (-1, 1):
                p = list(np.array(idx) + 1)
                p[ax] += step
                assert padded[tuple(p)] != OUTSIDE
                count += 1
        assert count == 2 * d.n


def test_links_count_box():
    d = build_box_domain(2, [1.0, 1.0], 0.25)
    i, j = d.links
    assert len(i) == 2 * 5 * 4
    diff = np.abs(np.array(np.unravel_index(i, d.shape)) - np.array(np.unravel_index(j, d.shape)))
    assert np.all(diff.sum(axis=0) == 1)


def test_set_boundary_constant():
    d = build_box_domain(2, [1.0, 1.0], 0.25)
    u = VectorField.constant(d, [0.5, 0.5])
    v = set_boundary(u, [1.0, 0.0])
    np.testing.assert_array_equal(v.flat[d.boundary], np.tile([1.0, 0.0], (len(d.boundary), 1)))
    np.testing.assert_array_equal(v.flat[d.interior], u.flat[d.interior])


def test_set_boundary_ring_and_radius():
    d = build_box_domain(2, [1.0, 1.0], 0.125)
    a = np.array([1.0, 0.0])
    r = 0.1
    v = set_boundary(VectorField.constant(d, a),
                     lambda x: a + r * np.stack([np.cos(x[:, 0]), np.sin(x[:, 0])], axis=1))
    dist = np.linalg.norm(v.flat[d.boundary] - a, axis=1)
    np.testing.assert_allclose(dist, r, rtol=0, atol=1e-14)
    assert boundary_radius(v, a) == pytest.approx(r, abs=1e-14)


def test_boundary_radius_cases():
    d = build_box_domain(1, [1.0], 0.25)
    a = np.array([2.0])
    u = VectorField.constant(d, a)
    assert boundary_radius(u, a) == 0.0
    u.flat[d.boundary[0]] = a + 0.3
    u.flat[d.boundary[1]] = a - 0.1
    assert boundary_radius(u, a) == pytest.approx(0.3)


def test_set_boundary_wrong_dimension():
    d = build_box_domain(1, [1.0], 0.25)
    with pytest.raises(InvalidArgumentError):
        set_boundary(VectorField.constant(d, [0.0]), [1.0, 2.0])


def test_mask_file_roundtrip(tmp_path):
    mask = l_shape()
    save_mask_file(mask, tmp_path / "m.txt")
    np.testing.assert_array_equal(load_mask_file(tmp_path / "m.txt"), mask)
    (tmp_path / "one.txt").write_text("0111110\n")
    assert load_mask_file(tmp_path / "one.txt").ndim == 1
    (tmp_path / "bad.txt").write_text("012\n")
    with pytest.raises(InvalidArgumentError):
        load_mask_file(tmp_path / "bad.txt")


@pytest.mark.parametrize("maker", [
    lambda: build_box_domain(1, [1.0], 0.125),
    lambda: build_box_domain(2, [1.0, 0.5], 0.125, origin=(-0.5, 2.0)),
    lambda: build_masked_domain(l_shape(), 0.1),
])
def test_field_csv_roundtrip(tmp_path, rng, maker):
    d = maker()
    vals = rng.standard_normal(d.shape + (2,))
    vals[d.kind == OUTSIDE] = 0.0
    u = VectorField(d, vals)
    write_field_csv(u, tmp_path / "f.csv")
    header = (tmp_path / "f.csv").read_text().splitlines()[0]
    assert header.split(",")[: d.n] == [f"i{k}" for k in range(d.n)]
    back = read_field_csv(tmp_path / "f.csv")
    np.testing.assert_array_equal(back.domain.kind, d.kind)
    np.testing.assert_array_equal(back.values, u.values)
    np.testing.assert_allclose(back.domain.coords, d.coords, atol=1e-12)


def test_boundary_from_csv(tmp_path, rng):
    d = build_box_domain(2, [1.0, 1.0], 0.25)
    u = VectorField(d, rng.standard_normal(d.shape + (2,)))
    write_field_csv(u, tmp_path / "g.csv")
    v = set_boundary(VectorField.constant(d, [0.0, 0.0]), boundary_from_csv(d, tmp_path / "g.csv"))
    np.testing.assert_array_equal(v.flat[d.boundary], u.flat[d.boundary])

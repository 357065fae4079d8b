"""Backend parity and algebraic contracts of the integer kernels."""

import random

import pytest

from rigidlab import _purecore
from rigidlab import kernels

try:
    from rigidlab import _fastcore
except ImportError:
    _fastcore = None

BACKENDS = [_purecore] + ([_fastcore] if _fastcore is not None else [])


def random_matrix(rng, rows, cols, bound=8):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def test_xgcd_identity():
    rng = random.Random(1)
    for _ in range(200):
        a = rng.randint(-10**6, 10**6)
        b = rng.randint(-10**6, 10**6)
        for mod in BACKENDS:
            g, x, y = mod.xgcd(a, b)
            assert g == a * x + b * y
            assert g >= 0
            if a or b:
                assert a % g == 0 and b % g == 0


@pytest.mark.skipif(_fastcore is None, reason="compiled core not built")
def test_backends_agree_on_random_inputs():
    rng = random.Random(2)
    for _ in range(40):
        rows = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 7))
        ncols = len(rows[0])
        assert _purecore.right_kernel_lattice(rows, ncols) == _fastcore.right_kernel_lattice(rows, ncols)
        assert _purecore.smith_normal_form(rows, ncols) == _fastcore.smith_normal_form(rows, ncols)
        lat_p = _purecore.IntLattice(ncols, track=True)
        lat_f = _fastcore.IntLattice(ncols, track=True)
        for row in rows:
            lat_p.add(row)
            lat_f.add(row)
        assert lat_p.basis() == lat_f.basis()
        probe = [rng.randint(-20, 20) for _ in range(ncols)]
        rem_p, combo_p = lat_p.reduce(probe)
        rem_f, combo_f = lat_f.reduce(probe)
        assert rem_p == rem_f and combo_p == combo_f


def test_lattice_basis_is_insertion_order_invariant():
    rng = random.Random(3)
    for mod in BACKENDS:
        for _ in range(25):
            rows = random_matrix(rng, 5, 6)
            lat1 = mod.IntLattice(6)
            for r in rows:
                lat1.add(r)
            lat2 = mod.IntLattice(6)
            for r in reversed(rows):
                lat2.add(r)
            assert lat1.basis() == lat2.basis()


def test_lattice_hnf_shape():
    rng = random.Random(4)
    for mod in BACKENDS:
        for _ in range(25):
            lat = mod.IntLattice(7)
            for r in random_matrix(rng, 6, 7):
                lat.add(r)
            basis = lat.basis()
            pivots = []
            for row in basis:
                lead = next(j for j, v in enumerate(row) if v)
                assert row[lead] > 0
                pivots.append(lead)
            assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
            for i, row in enumerate(basis):
                for k in range(i + 1, len(basis)):
                    p = basis[k][pivots[k]]
                    assert 0 <= row[pivots[k]] < p


def test_reduce_certificates_reconstruct_the_vector():
    rng = random.Random(5)
    for mod in BACKENDS:
        rows = random_matrix(rng, 6, 5)
        lat = mod.IntLattice(5, track=True)
        for r in rows:
            lat.add(r)
        for _ in range(30):
            coeffs = [rng.randint(-4, 4) for _ in rows]
            vec = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(5)]
            rem, combo = lat.reduce(vec)
            assert not any(rem)
            rebuilt = [0] * 5
            for idx, c in combo.items():
                for j in range(5):
                    rebuilt[j] += c * rows[idx][j]
            assert rebuilt == vec


def test_membership_matches_solvability_oracle():
    from oracles import solve_integer_combination

    rng = random.Random(6)
    for mod in BACKENDS:
        for _ in range(30):
            rows = random_matrix(rng, 4, 5, bound=4)
            lat = mod.IntLattice(5)
            for r in rows:
                lat.add(r)
            probe = [rng.randint(-6, 6) for _ in range(5)]
            assert lat.contains(probe) == (
                solve_integer_combination(rows, probe) is not None
            )


def test_kernel_lattice_annihilates_and_is_saturated():
    rng = random.Random(7)
    for mod in BACKENDS:
        for _ in range(30):
            rows = random_matrix(rng, rng.randint(1, 5), 6, bound=5)
            kern = mod.right_kernel_lattice(rows, 6)
            for vec in kern:
                assert all(sum(r[j] * vec[j] for j in range(6)) == 0 for r in rows)
            # saturation: any integer kernel member must reduce to zero
            lat = mod.IntLattice(6)
            for vec in kern:
                lat.add(vec)
            for _ in range(10):
                combo = [rng.randint(-3, 3) for _ in kern]
                vec = [sum(c * k[j] for c, k in zip(combo, kern)) for j in range(6)]
                for scale in (1, 2, 3):
                    if all(v % scale == 0 for v in vec):
                        assert lat.contains([v // scale for v in vec]) == all(
                            sum(r[j] * vec[j] // scale for j in range(6)) == 0
                            for r in rows
                        )


def test_kernel_of_classic_examples():
    for mod in BACKENDS:
        assert mod.right_kernel_lattice([[1, 1, 0], [0, 2, 2]], 3) == [[1, -1, 1]]
        assert mod.right_kernel_lattice([[1, 1], [1, -1]], 2) == []
        # the span of (1,1) and (1,-1) is all of Q^2: saturation is Z^2
        funcs = mod.right_kernel_lattice([[1, 1], [1, -1]], 2)
        assert mod.right_kernel_lattice(funcs, 2) == [[1, 0], [0, 1]]


def test_smith_normal_form_examples_and_chain():
    rng = random.Random(8)
    for mod in BACKENDS:
        assert mod.smith_normal_form([[2, 0], [0, 3], [4, 6]], 2) == [1, 6]
        assert mod.smith_normal_form([[2, 4], [4, 8]], 2) == [2]
        assert mod.smith_normal_form([], 3) == []
        for _ in range(20):
            rows = random_matrix(rng, 4, 4, bound=6)
            diag = mod.smith_normal_form(rows, 4)
            for a, b in zip(diag, diag[1:]):
                assert b % a == 0


def test_tree_kernels_match_each_other():
    rng = random.Random(9)
    leq = [1 if i <= j else 0 for i in range(3) for j in range(3)]
    for _ in range(300):
        def rand_tree():
            n = rng.randint(1, 6)
            parents = [-1] + [rng.randrange(i) for i in range(1, n)]
            labels = [rng.randrange(3) for _ in range(n)]
            return parents, labels

        p1, l1 = rand_tree()
        p2, l2 = rand_tree()
        results = set()
        for mod in BACKENDS:
            results.add(bool(mod.tree_embed_dp(p1, l1, p2, l2, leq, 3)))
            results.add(bool(mod.tree_embed_search(p1, l1, p2, l2, leq, 3)))
        assert len(results) == 1

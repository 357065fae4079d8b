"""Evaluators for the recursive divisibility formulas over truncated
groups, and p-length of finite p-groups.

The threshold formulas phi(n, m, beta) hold of u exactly when u lies in
the subgroup generated by the length-m sequence atoms whose last entry
clears beta (for beta = 0 this is plain p-power divisibility).  The
selector formula psi(n, alpha) holds of u exactly when u is a nonzero
integer combination of level-n atoms one of whose interleaved index
sets contains alpha; `eval_psi` implements that characterization
directly, while `unfold_psi` evaluates the quantified definition with
the witness search guarded by the divisibility certificate, and the two
are cross-checked on the safe region.
"""

from __future__ import annotations

from fractions import Fraction

from .groups import GroupElement, TruncatedGroup, contains, divides_pinf
from .ordinals import Ordinal


def _require_member(g: TruncatedGroup, u: GroupElement) -> None:
    if not contains(g, u):
        raise ValueError("element is not a member of the group")


def _require_block(g: TruncatedGroup, n: int) -> None:
    if not (0 <= n < g.layout.block_count):
        raise ValueError(f"no block {n} in this layout")


def eval_phi(g: TruncatedGroup, n: int, m: int, beta: Ordinal, u: GroupElement) -> bool:
    """Threshold formula: u generated by length-m atoms with last entry >= beta."""
    _require_block(g, n)
    _require_member(g, u)
    zero = Ordinal(0, 0)
    if m == 0:
        if beta != zero:
            raise ValueError("the length-0 formula only exists at threshold 0")
        return divides_pinf(g, g.primes.p[(n, 0, 0)], u)
    if beta == zero:
        prime = g.primes.p.get((n, m, 0))
        if prime is None:
            # beyond the sequence-length truncation the designated set is empty
            return u.is_zero()
        return divides_pinf(g, prime, u)
    if not u.is_integral():
        return False
    for idx in u.support:
        atom = g.atoms[idx]
        if atom.level != n + 1 or atom.kind != "a" or len(atom.seq) != m:
            return False
        if atom.seq[m - 1] < beta:
            return False
    return True


def eval_psi(g: TruncatedGroup, n: int, alpha: Ordinal, u: GroupElement) -> bool:
    """Selector formula, by its characterization: u is a nonzero integer
    combination of level-n atoms and alpha indexes one of them."""
    _require_block(g, n)
    _require_member(g, u)
    if u.is_zero() or not u.is_integral():
        return False
    level_n = set(g.levels[n])
    support = u.support
    if any(idx not in level_n for idx in support):
        return False
    return any(alpha in g.gsets[n][idx] for idx in support)


def psi_satisfiable(g: TruncatedGroup, n: int, alpha: Ordinal) -> bool:
    """Whether some member satisfies the selector formula at alpha,
    decided by scanning level-n atoms."""
    _require_block(g, n)
    return any(alpha in ords for ords in g.gsets[n].values())


def unfold_psi(g: TruncatedGroup, n: int, alpha: Ordinal, u: GroupElement) -> bool:
    """Quantified definition of the selector formula.

    The witness y is searched over the guarded space dictated by the
    pair-divisibility: one singleton-sequence atom per support atom of
    u, drawn from that atom's interleaved index set, with matching
    coefficients.  On unsafe top-layer indices the search may
    legitimately disagree with eval_psi; agreement is only claimed on
    the safe region.
    """
    from itertools import product

    from .groups import Atom

    _require_block(g, n)
    _require_member(g, u)
    if not eval_phi(g, n, 0, Ordinal(0, 0), u):
        return False
    support = u.support
    coeffs = [u.get(idx) for idx in support]
    p_pair = g.primes.p[(n, 1, 1)]
    choices = [sorted(g.gsets[n][idx]) for idx in support]
    if not support:
        return False
    for pick in product(*choices):
        y = GroupElement.zero()
        ok = True
        for alpha_i, c in zip(pick, coeffs):
            witness_atom = Atom(n + 1, "a", alpha_i, (alpha_i,))
            if not g.has_atom(witness_atom):
                ok = False
                break
            y = y + GroupElement.of({g.atom_index(witness_atom): c})
        if not ok:
            continue
        if not divides_pinf(g, p_pair, u + y):
            continue
        if not eval_phi(g, n, 1, alpha, y):
            continue
        if eval_phi(g, n, 1, alpha.successor(), y):
            continue
        return True
    return False


def p_length(orders: list[int], p: int, max_steps: int = 10_000) -> int:
    """Least k with p^k annihilating the p-group given by cyclic orders.

    Computed by iterating multiplication by p on the presentation; each
    step divides every remaining cyclic order by p.
    """
    if p < 2 or any(p % d == 0 for d in range(2, p) if d * d <= p):
        raise ValueError("p must be prime")
    current = []
    for m in orders:
        if m < 2:
            raise ValueError("cyclic orders must be at least 2")
        mm = m
        while mm % p == 0:
            mm //= p
        if mm != 1:
            raise ValueError(f"order {m} is not a power of {p}")
        current.append(m)
    steps = 0
    while current:
        if steps > max_steps:
            raise AssertionError("length iteration failed to terminate")
        current = [m // p for m in current if m // p > 1]
        steps += 1
    return steps

"""Lie algebras given by structure constants, and invariant forms on them.

A Lie algebra of dimension n is stored as the full tensor c[i, j, k] with
[e_i, e_j] = sum_k c[i, j, k] e_k (0-based internally; the JSON wire format
is 1-based and sparse).  Left-invariant forms are coefficient vectors over
the dual basis e^1..e^n, with 2-forms indexed by strict pairs i < j in
lexicographic order.  The exterior derivative on invariant 1-forms is the
dual of the bracket: (d a)(X, Y) = -a([X, Y]).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

JACOBI_TOL = 1e-12


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants of a finite-dimensional real Lie algebra.

    c has shape (dim, dim, dim); c[i, j, k] is the e_k coefficient of
    [e_i, e_j].  Antisymmetry in (i, j) and the Jacobi identity are
    enforced at construction time by load_algebra / new_algebra.
    """

    name: str
    dim: int
    c: np.ndarray

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[x, y] for coefficient vectors x, y (real or complex)."""
        return np.einsum("ijk,i,j->k", self.c, x, y)


@dataclass(frozen=True)
class InvariantForm:
    """A left-invariant 1- or 2-form as a coefficient vector.

    Degree 1: coeffs[i] is the e^i coefficient.  Degree 2: coeffs is
    indexed by strict_pairs(dim) so coeffs[p] multiplies e^i ^ e^j for
    the p-th pair (i, j) with i < j.
    """

    degree: int
    dim: int
    coeffs: np.ndarray

    def __call__(self, *vectors: np.ndarray) -> complex:
        if len(vectors) != self.degree:
            raise ValidationError(
                f"form of degree {self.degree} applied to {len(vectors)} vectors"
            )
        if self.degree == 1:
            return complex(np.dot(self.coeffs, vectors[0]))
        x, y = vectors
        total = 0.0 + 0.0j
        for p, (i, j) in enumerate(strict_pairs(self.dim)):
            total += self.coeffs[p] * (x[i] * y[j] - x[j] * y[i])
        return complex(total)


def strict_pairs(n: int) -> list[tuple[int, int]]:
    """Lexicographic list of index pairs (i, j) with 0 <= i < j < n."""
    return list(itertools.combinations(range(n), 2))


def jacobi_defect(c: np.ndarray) -> tuple[float, tuple[int, int, int, int]]:
    """Worst Jacobi violation and the (i, j, k, s) quadruple achieving it.

    The cyclic sum [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
    must vanish; the returned defect is the largest absolute component s
    of that sum over all strict triples.
    """
    # cyc[i,j,k,s] = sum_l c[i,j,l] c[l,k,s], then cycled over (i,j,k)
    t = np.einsum("ijl,lks->ijks", c, c)
    cyc = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
    flat = int(np.argmax(np.abs(cyc)))
    worst = np.unravel_index(flat, cyc.shape)
    return float(np.abs(cyc).max()), tuple(int(w) for w in worst)


def new_algebra(name: str, dim: int, c: np.ndarray) -> LieAlgebra:
    """Validate structure constants and build a LieAlgebra.

    Requires dim even and >= 2, c antisymmetric in its first two slots,
    and the Jacobi identity to within 1e-12.
    """
    if dim < 2 or dim % 2 != 0:
        raise ValidationError(f"dimension must be even and >= 2, got {dim}")
    if c.shape != (dim, dim, dim):
        raise ValidationError(f"structure tensor shape {c.shape} does not match dim {dim}")
    asym = np.abs(c + np.transpose(c, (1, 0, 2))).max()
    if asym > 0:
        raise ValidationError(f"structure constants not antisymmetric (defect {asym:.3e})")
    defect, (i, j, k, s) = jacobi_defect(c)
    if defect > JACOBI_TOL:
        raise ValidationError(
            f"Jacobi identity fails: defect {defect:.6e} on basis triple "
            f"(e{i + 1}, e{j + 1}, e{k + 1}), component e{s + 1}"
        )
    return LieAlgebra(name=name, dim=dim, c=c)


def load_algebra(doc: dict) -> LieAlgebra:
    """Build a LieAlgebra from its JSON document.

    Expected shape: {"name": str, "dim": int, "brackets": [{"i", "j",
    "k", "c"}, ...]} with 1-based indices and i < j; the antisymmetric
    closure is taken automatically.  Raises ValidationError on malformed
    entries, out-of-range indices, duplicate (i, j, k) triples, or a
    Jacobi violation.
    """
    if not isinstance(doc, dict):
        raise ValidationError("algebra document must be a JSON object")
    try:
        dim = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise ValidationError("algebra document needs an integer 'dim'") from None
    name = str(doc.get("name", ""))
    if dim < 2 or dim % 2 != 0:
        raise ValidationError(f"dimension must be even and >= 2, got {dim}")
    c = np.zeros((dim, dim, dim))
    seen = set()
    for pos, entry in enumerate(doc.get("brackets", [])):
        try:
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
            coef = float(entry["c"])
        except (KeyError, TypeError, ValueError):
            raise ValidationError(f"bracket entry {pos} is malformed: {entry!r}") from None
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise ValidationError(
                f"bracket entry {pos} has index out of range 1..{dim}: {entry!r}"
            )
        if i >= j:
            raise ValidationError(f"bracket entry {pos} needs i < j, got i={i}, j={j}")
        if (i, j, k) in seen:
            raise ValidationError(f"duplicate bracket entry for (i={i}, j={j}, k={k})")
        seen.add((i, j, k))
        c[i - 1, j - 1, k - 1] = coef
        c[j - 1, i - 1, k - 1] = -coef
    return new_algebra(name, dim, c)


def serialize_algebra(g: LieAlgebra) -> dict:
    """JSON document for g; inverse of load_algebra up to entry order."""
    brackets = []
    for i, j in strict_pairs(g.dim):
        for k in range(g.dim):
            if g.c[i, j, k] != 0.0:
                brackets.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": float(g.c[i, j, k])})
    return {"name": g.name, "dim": g.dim, "brackets": brackets}


def ce_d_matrix(g: LieAlgebra) -> np.ndarray:
    """Matrix of d from 1-form coefficients to pair-indexed 2-form coefficients.

    Row p = (i, j) gives (d a)(e_i, e_j) = -a([e_i, e_j]) = -sum_k
    c[i, j, k] a_k.
    """
    pairs = strict_pairs(g.dim)
    return np.array([[-g.c[i, j, k] for k in range(g.dim)] for (i, j) in pairs])


def ce_d(g: LieAlgebra, alpha: InvariantForm) -> InvariantForm:
    """Exterior derivative of an invariant 1-form; degree-2 input is rejected.

    Invariant 2-forms on a 2-step algebra already exhaust what the rank
    and h^1 computations need, so d is only provided in degree 1.
    """
    if alpha.degree != 1:
        raise ValidationError(f"ce_d takes a 1-form, got degree {alpha.degree}")
    if alpha.dim != g.dim:
        raise ValidationError(f"form dimension {alpha.dim} does not match algebra {g.dim}")
    coeffs = ce_d_matrix(g) @ alpha.coeffs
    return InvariantForm(degree=2, dim=g.dim, coeffs=coeffs)


def _abelian(dim: int) -> LieAlgebra:
    return new_algebra(f"abelian{dim}", dim, np.zeros((dim, dim, dim)))


def _heis3xR3() -> LieAlgebra:
    doc = {"name": "heis3xR3", "dim": 6, "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}]}
    return load_algebra(doc)


def _free2step3gen() -> LieAlgebra:
    doc = {
        "name": "free2step3gen",
        "dim": 6,
        "brackets": [
            {"i": 1, "j": 2, "k": 4, "c": 1.0},
            {"i": 1, "j": 3, "k": 5, "c": 1.0},
            {"i": 2, "j": 3, "k": 6, "c": 1.0},
        ],
    }
    return load_algebra(doc)


def catalog_names() -> list[str]:
    """Names accepted by catalog(); 'abelian<2m>' stands for the whole family."""
    return ["abelian<2m>", "heis3xR3", "free2step3gen"]


def catalog(name: str) -> LieAlgebra:
    """Built-in algebras by name: abelian2m (e.g. 'abelian6'), heis3xR3,
    free2step3gen.  Unknown names raise ValidationError."""
    if name == "heis3xR3":
        return _heis3xR3()
    if name == "free2step3gen":
        return _free2step3gen()
    if name.startswith("abelian"):
        tail = name[len("abelian"):]
        if tail.isdigit():
            dim = int(tail)
            if dim >= 2 and dim % 2 == 0:
                return _abelian(dim)
        raise ValidationError(f"abelian dimension must be a positive even integer: {name!r}")
    raise ValidationError(
        f"unknown catalog algebra {name!r}; available: {', '.join(catalog_names())}"
    )

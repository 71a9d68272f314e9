"""Magnetic Laplacian family for signed directed graphs.

Edge signs and directions are encoded as complex phases: a phase parameter q
in [0, pi/2] rotates directional information between the real and imaginary
axes, and sign enters the phase as a pi offset. All operators here are
Hermitian by construction (upper triangle built once, then mirrored by
conjugation), so eigenvalues are real and eigenvectors unitary.

Connectivity is unsigned: A(u,v) = 1 iff any edge u->v exists; the phase
matrix alone carries sign and direction. Double precision throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graphs import SignedDiGraph


@dataclass(frozen=True)
class PhaseSpec:
    """Phase parameter q plus the small epsilon guarding the normalizer."""

    q: float
    epsilon: float = 1e-12

    def __post_init__(self):
        if not 0.0 <= self.q <= math.pi / 2:
            raise ValueError(f"q must lie in [0, pi/2], got {self.q}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class HermitianMatrix:
    """Sparse complex Hermitian matrix; exactly conjugate-symmetric.

    ``matrix`` is the full CSR form. Instances must be built through
    :meth:`from_triangle`, which mirrors the strict upper triangle by
    conjugation, guaranteeing entry(u,v) == conj(entry(v,u)) bit-exactly
    and a real diagonal.
    """

    n: int
    matrix: sp.csr_matrix

    @classmethod
    def from_triangle(cls, n, rows, cols, values, diag=None) -> "HermitianMatrix":
        """Build from strict-upper entries (rows < cols) and a real diagonal."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.complex128)
        if rows.size and not np.all(rows < cols):
            raise ValueError("triangle entries must satisfy row < col")
        parts_r = [rows, cols]
        parts_c = [cols, rows]
        parts_v = [values, np.conj(values)]
        if diag is not None:
            diag = np.asarray(diag, dtype=np.float64)
            idx = np.nonzero(diag)[0]
            parts_r.append(idx)
            parts_c.append(idx)
            parts_v.append(diag[idx].astype(np.complex128))
        coo = sp.coo_matrix(
            (np.concatenate(parts_v), (np.concatenate(parts_r), np.concatenate(parts_c))),
            shape=(n, n),
        )
        return cls(n=n, matrix=coo.tocsr())

    def entry(self, u: int, v: int) -> complex:
        return complex(self.matrix[u, v])

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def hermitian_defect(self) -> float:
        """max |M - M^dagger|; zero for every constructed operator."""
        diff = self.matrix - self.matrix.getH()
        if diff.nnz == 0:
            return 0.0
        return float(np.abs(diff.data).max())


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending, real) and eigenvector columns of a Hermitian matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _pair_flags(g: SignedDiGraph):
    """Per unordered connected pair (u < v): sign/direction indicator flags.

    Returns a dict (u, v) -> [pos u->v, neg u->v, pos v->u, neg v->u].
    """
    flags: dict[tuple[int, int], list[bool]] = {}
    for edges, base in ((g.pos_list, 0), (g.neg_list, 1)):
        for u, v in edges:
            if u < v:
                key, slot = (u, v), base
            else:
                key, slot = (v, u), 2 + base
            flags.setdefault(key, [False, False, False, False])[slot] = True
    return flags


def phase_entry(u: int, v: int, g: SignedDiGraph, spec: PhaseSpec) -> complex:
    """Phase-matrix entry P(u,v): direction and sign encoded as a unit phase.

    P(u,v) = [exp(i*th) A(u,v) + exp(i*tb) A(v,u)] / (|numerator| + eps)
    where th = q for a positive edge u->v and pi+q for a negative one, and
    tb = -q / pi-q for the reverse edge. Zero when neither direction exists.
    """
    q = spec.q
    num = 0j
    if (u, v) in g.pos_edges:
        num += cmath.exp(1j * q)
    elif (u, v) in g.neg_edges:
        num += cmath.exp(1j * (math.pi + q))
    if (v, u) in g.pos_edges:
        num += cmath.exp(-1j * q)
    elif (v, u) in g.neg_edges:
        num += cmath.exp(1j * (math.pi - q))
    if num == 0:
        return 0j
    return num / (abs(num) + spec.epsilon)


def _phase_for_flags(fw_pos, fw_neg, bw_pos, bw_neg, q, eps) -> complex:
    num = 0j
    if fw_pos:
        num += cmath.exp(1j * q)
    elif fw_neg:
        num += cmath.exp(1j * (math.pi + q))
    if bw_pos:
        num += cmath.exp(-1j * q)
    elif bw_neg:
        num += cmath.exp(1j * (math.pi - q))
    if num == 0:
        return 0j
    return num / (abs(num) + eps)


def symmetrize_adjacency(g: SignedDiGraph) -> sp.csr_matrix:
    """A_s = (A + A^T)/2 over unsigned connectivity; entries in {0, 1/2, 1}."""
    flags = _pair_flags(g)
    rows, cols, vals = [], [], []
    for (u, v), (fp, fn, bp, bn) in flags.items():
        weight = 0.5 * ((fp or fn) + (bp or bn))
        rows.extend((u, v))
        cols.extend((v, u))
        vals.extend((weight, weight))
    return sp.csr_matrix(
        (np.array(vals, dtype=np.float64), (rows, cols)),
        shape=(g.num_nodes, g.num_nodes),
    )


def degree_matrix(a_s: sp.spmatrix) -> np.ndarray:
    """Diagonal of the symmetric degree matrix: row sums of A_s."""
    return np.asarray(a_s.sum(axis=1)).ravel()


def _pair_arrays(g: SignedDiGraph, spec: PhaseSpec):
    """Sorted unordered pairs with their A_s weights and phase values."""
    flags = _pair_flags(g)
    pairs = sorted(flags)
    n_pairs = len(pairs)
    rows = np.empty(n_pairs, dtype=np.int64)
    cols = np.empty(n_pairs, dtype=np.int64)
    weights = np.empty(n_pairs, dtype=np.float64)
    phases = np.empty(n_pairs, dtype=np.complex128)
    for k, (u, v) in enumerate(pairs):
        fp, fn, bp, bn = flags[(u, v)]
        rows[k] = u
        cols[k] = v
        weights[k] = 0.5 * ((fp or fn) + (bp or bn))
        phases[k] = _phase_for_flags(fp, fn, bp, bn, spec.q, spec.epsilon)
    return rows, cols, weights, phases


def _degrees(g: SignedDiGraph, rows, cols, weights) -> np.ndarray:
    deg = np.zeros(g.num_nodes, dtype=np.float64)
    np.add.at(deg, rows, weights)
    np.add.at(deg, cols, weights)
    return deg


def hermitian_adjacency(g: SignedDiGraph, spec: PhaseSpec) -> HermitianMatrix:
    """H = A_s elementwise-times P: nine edge configurations, nine values."""
    rows, cols, weights, phases = _pair_arrays(g, spec)
    return HermitianMatrix.from_triangle(g.num_nodes, rows, cols, weights * phases)


def laplacian_unnormalized(g: SignedDiGraph, spec: PhaseSpec) -> HermitianMatrix:
    """D_s - H; Hermitian and positive semidefinite."""
    rows, cols, weights, phases = _pair_arrays(g, spec)
    deg = _degrees(g, rows, cols, weights)
    return HermitianMatrix.from_triangle(
        g.num_nodes, rows, cols, -weights * phases, diag=deg
    )


def laplacian_normalized(g: SignedDiGraph, spec: PhaseSpec) -> HermitianMatrix:
    """I - (D^-1/2 A_s D^-1/2) elementwise-times P; eigenvalues in [0, 2].

    Zero-degree nodes keep an identity row (D^-1/2 taken as 0 there).
    """
    rows, cols, weights, phases = _pair_arrays(g, spec)
    deg = _degrees(g, rows, cols, weights)
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = deg[nz] ** -0.5
    scaled = -weights * inv_sqrt[rows] * inv_sqrt[cols] * phases
    return HermitianMatrix.from_triangle(
        g.num_nodes, rows, cols, scaled, diag=np.ones(g.num_nodes)
    )


def renormalized_propagation(g: SignedDiGraph, spec: PhaseSpec) -> HermitianMatrix:
    """Self-looped, degree-rescaled propagation operator used by conv layers.

    With At = A_s + I and Dt its row sums, returns
    (Dt^-1/2 At Dt^-1/2) elementwise-times P. The added self-loop has no
    direction or sign, so its phase factor is 1 and the diagonal stays real
    positive. Spectral radius is at most 1.
    """
    rows, cols, weights, phases = _pair_arrays(g, spec)
    deg_tilde = _degrees(g, rows, cols, weights) + 1.0
    inv_sqrt = deg_tilde**-0.5
    off = weights * inv_sqrt[rows] * inv_sqrt[cols] * phases
    return HermitianMatrix.from_triangle(
        g.num_nodes, rows, cols, off, diag=1.0 / deg_tilde
    )


def spmv(m: HermitianMatrix, x: np.ndarray) -> np.ndarray:
    """Sparse operator times dense vector/matrix; serial, deterministic."""
    if x.shape[0] != m.n:
        raise ValueError(f"operand has {x.shape[0]} rows, operator is {m.n}x{m.n}")
    return m.matrix @ x


def dense_eigendecomposition(m: HermitianMatrix, cap: int = 2000) -> Spectrum:
    """Full eigendecomposition (ascending); diagnostics and tests only."""
    if m.n > cap:
        raise ValueError(f"matrix size {m.n} exceeds dense eigendecomposition cap {cap}")
    w, u = np.linalg.eigh(m.toarray())
    return Spectrum(eigenvalues=w, eigenvectors=u)


def chebyshev_apply(l_n: HermitianMatrix, x: np.ndarray, coeffs) -> np.ndarray:
    """Truncated Chebyshev filter sum_k c_k T_k(Lt) x with Lt = L_N - I.

    The rescaling uses lambda_max = 2, so Lt has spectrum in [-1, 1].
    Recurrence: T_0 = x, T_1 = Lt x, T_k = 2 Lt T_{k-1} - T_{k-2}.
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("need at least one Chebyshev coefficient")
    t_prev = x.astype(np.complex128)
    out = coeffs[0] * t_prev
    if len(coeffs) == 1:
        return out
    t_cur = spmv(l_n, t_prev) - t_prev
    out = out + coeffs[1] * t_cur
    for c in coeffs[2:]:
        t_next = 2.0 * (spmv(l_n, t_cur) - t_cur) - t_prev
        out = out + c * t_next
        t_prev, t_cur = t_cur, t_next
    return out


def dump_operator(m: HermitianMatrix, path) -> None:
    """Write 'row col real imag' lines for external verification."""
    coo = m.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        for k in order:
            v = coo.data[k]
            fh.write(f"{coo.row[k]} {coo.col[k]} {v.real:.17g} {v.imag:.17g}\n")

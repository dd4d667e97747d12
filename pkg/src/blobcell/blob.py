"""The generalized blob algebra and its graded cellular structure.

The specialized cyclotomic algebra H (see :mod:`.hecke`) has a distinguished
two-sided ideal generated, for each level component j, by the rank-one
idempotent of the two-string subalgebra whose `L`-eigenvalues are
``(q^{kappa_j}, q^{kappa_j + 1})``.  The quotient by this ideal is the
generalized blob algebra B.  This module

* builds B as an explicit quotient of the regular representation
  (:class:`BlobAlgebra`, :func:`build_blob`),
* realizes the quiver-Hecke generators ``e(i)``, ``y_k``, ``psi_r`` inside
  B -- or, for comparison, inside H itself -- and verifies the complete
  defining relation suite (:class:`KLRImages`, :func:`klr_images`),
* constructs the homogeneous cellular basis ``m_{S,T}`` indexed by pairs of
  standard one-column tableaux (:class:`CellularBasis`,
  :func:`build_cellular_basis`) and machine-checks cellularity, the
  Jucys-Murphy triangularity, the grading, and the cell-module/Gram-matrix
  structure.

All arithmetic is exact, over the prime field F_p fixed by the parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import combinatorics as comb
from .exactfield import RowSpace, invert_matrix, nullspace, rank, rref
from .hecke import (HeckeParams, RegularRep, class_partition,
                    class_idempotent_vector, e2_idempotents,
                    embed_two_string, generic_normal_form, specialize_vector)

official_word = comb.official_word


class RelationFailure(Exception):
    """A defining relation fails; carries the relation name and a witness."""

    def __init__(self, relation: str, witness):
        self.relation = relation
        self.witness = witness
        super().__init__(f"relation {relation} fails at witness {witness}")


# ---------------------------------------------------------------------------
# Dimension bookkeeping
# ---------------------------------------------------------------------------


def one_column_dimension(n: int, l: int) -> int:
    """Sum of squared standard-tableau counts over one-column shapes."""
    return sum(len(comb.std_tableaux(lam)) ** 2
               for lam in comb.one_column_shapes(n, l))


# ---------------------------------------------------------------------------
# Dense left-multiplication matrices
# ---------------------------------------------------------------------------


def left_mult_matrix(reg: RegularRep, v: np.ndarray) -> np.ndarray:
    """Left-multiplication matrix of the element with coefficient vector v.

    Column (a, w) is v * L^a T_w, computed along a spanning tree of the
    basis: one right-multiplication per basis key, so the whole matrix
    costs dim matrix-vector products."""
    p, D, n = reg.p, reg.dim, reg.params.n
    ident = comb.perm_identity(n)
    keys = sorted(reg.nf.basis,
                  key=lambda key: (comb.perm_length(key[1]), sum(key[0])))
    cols = np.zeros((D, D), dtype=np.int64)
    cols[:, reg.nf.index[keys[0]]] = v % p
    for a, w in keys[1:]:
        if w != ident:
            word = comb.official_word(w)
            parent = (a, comb.perm_from_word(n, word[:-1]))
            M = reg.RT[word[-1]]
        else:
            k = next(j for j in range(n) if a[j])
            parent = (a[:k] + (a[k] - 1,) + a[k + 1:], w)
            M = reg.RL[k + 1]
        cols[:, reg.nf.index[(a, w)]] = \
            M @ cols[:, reg.nf.index[parent]] % p
    return cols


def _mat_pow(M: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(M.shape[0], dtype=np.int64)
    B = M % p
    while k:
        if k & 1:
            out = out @ B % p
        B = B @ B % p
        k >>= 1
    return out


# ---------------------------------------------------------------------------
# The quotient algebra
# ---------------------------------------------------------------------------


def _ideal_closure(reg: RegularRep, seeds: list[dict]):
    """Row-reduced basis of the two-sided ideal generated by the seeds.

    Starts from the right ideals seed*H (the columns of the seeds'
    left-multiplication matrices) and closes under left multiplication by
    the algebra generators; left multiples of a right-stable subspace stay
    right-stable, so the limit is the two-sided ideal."""
    p = reg.p
    blocks = [reg.matrix_of(s).T for s in seeds]
    R, piv = rref(np.vstack(blocks) % p, p)
    R = R[:len(piv)]
    gens = [reg.T[i] for i in reg.T] + [reg.L[1]]
    while True:
        stacked = np.vstack([R] + [R @ g.T % p for g in gens])
        R2, piv2 = rref(stacked, p)
        R2 = R2[:len(piv2)]
        if len(piv2) == len(piv):
            return R2, piv2
        R, piv = R2, piv2


class BlobAlgebra:
    """The quotient B = H / (two-string rank-one idempotents), presented on
    an explicit coordinate basis.

    With ``quotient=False`` the same interface wraps H itself (trivial
    ideal), so that the quiver-Hecke generator images can be compared
    before and after passing to the quotient.

    Attributes: ``dim``; ``quotient_map`` (dim x dim_H matrix taking
    H-coordinates to B-coordinates); generator image matrices ``T``, ``L``
    with right-multiplication companions ``RT``, ``RL``; the
    anti-involution matrix ``star``; the coordinate vector ``unit`` of the
    identity."""

    def __init__(self, params: HeckeParams, quotient: bool = True):
        params.validate()
        self.params = params
        self.is_quotient = quotient
        self.reg = reg = RegularRep(params)
        self.p, self.q, self.e = params.p, params.q, params.e
        p = self.p
        D = reg.dim
        if quotient and params.n >= 2:
            seeds = [embed_two_string(params, f)
                     for f in e2_idempotents(params)]
            rows, piv = _ideal_closure(reg, seeds)
        else:
            rows = np.zeros((0, D), dtype=np.int64)
            piv = []
        self.ideal_rows = rows
        self.ideal_rank = len(piv)
        self.dim = D - self.ideal_rank
        if quotient:
            expected = one_column_dimension(params.n, params.l)
            if self.dim != expected:
                raise ValueError(
                    f"quotient dimension {self.dim} differs from the "
                    f"standard-tableau count {expected} at "
                    f"(n, l) = ({params.n}, {params.l})")
        pivset = set(piv)
        nonpiv = [j for j in range(D) if j not in pivset]
        self._nonpivots = nonpiv
        # reduction mod the ideal sends v to v - rows^T . v[pivots]; the
        # quotient coordinates are the non-pivot entries of the result
        Pi = np.zeros((self.dim, D), dtype=np.int64)
        Pi[np.arange(self.dim), nonpiv] = 1
        if piv:
            Pi[:, piv] = (Pi[:, piv] - rows[:, nonpiv].T) % p
        Lift = np.zeros((D, self.dim), dtype=np.int64)
        Lift[nonpiv, np.arange(self.dim)] = 1
        self.quotient_map = Pi
        self._lift_mat = Lift
        if piv:
            stab = [("star", reg.star_mat), ("L_1", reg.L[1])]
            stab += [(f"T_{i}", reg.T[i]) for i in reg.T]
            for name, M in stab:
                if (Pi @ (M @ rows.T % p) % p).any():
                    raise ValueError(f"ideal is not stable under {name}")
        self.T = {i: self._q(reg.T[i]) for i in reg.T}
        self.L = {k: self._q(reg.L[k]) for k in reg.L}
        self.RT = {i: self._q(reg.RT[i]) for i in reg.RT}
        self.RL = {k: self._q(reg.RL[k]) for k in reg.RL}
        self.star = self._q(reg.star_mat)
        self.unit = Pi @ reg.unit_vector() % p
        self.identity = np.eye(self.dim, dtype=np.int64)

    def _q(self, M: np.ndarray) -> np.ndarray:
        return self.quotient_map @ M @ self._lift_mat % self.p

    def mm(self, *mats) -> np.ndarray:
        out = mats[0] % self.p
        for M in mats[1:]:
            out = out @ M % self.p
        return out

    def push(self, el) -> np.ndarray:
        """Quotient left-multiplication matrix of an element of H, given
        as a coefficient dict or vector on the normal-form basis."""
        if isinstance(el, dict):
            v = np.zeros(self.reg.dim, dtype=np.int64)
            for key, c in el.items():
                v[self.reg.nf.index[key]] = c % self.p
        else:
            v = np.asarray(el, dtype=np.int64) % self.p
        return self._q(left_mult_matrix(self.reg, v))

    def lift(self, v: np.ndarray) -> np.ndarray:
        """A representative in H-coordinates of a quotient vector."""
        return self._lift_mat @ (np.asarray(v, dtype=np.int64) % self.p)

    def lmat(self, v: np.ndarray) -> np.ndarray:
        """Left-multiplication matrix of the element with quotient
        coordinate vector v."""
        return self.push(self.lift(v))

    def vec(self, M: np.ndarray) -> np.ndarray:
        """Coordinate vector of the element whose left-multiplication
        matrix is M."""
        return M @ self.unit % self.p

    def star_vec(self, v: np.ndarray) -> np.ndarray:
        return self.star @ v % self.p

    def star_of_matrix(self, M: np.ndarray) -> np.ndarray:
        """Left-multiplication matrix of the star of the element with
        left-multiplication matrix M."""
        return self.lmat(self.star_vec(self.vec(M)))


def build_blob(params: HeckeParams) -> "BlobAlgebra":
    """Construct the quotient algebra B with certified dimension."""
    return BlobAlgebra(params, quotient=True)


# ---------------------------------------------------------------------------
# Quiver-Hecke generator images
# ---------------------------------------------------------------------------


class KLRImages:
    """Images of the quiver-Hecke generators inside the given algebra.

    ``E[i]`` (for realized residue sequences i) are the specialized class
    idempotents; ``Y[k]`` are the nilpotent parts of the Jucys-Murphy
    elements; ``PSI[r]`` are the intertwiners, normalized so that the
    complete defining relation suite holds.  All are square matrices
    acting on the coordinate basis of the carrier algebra."""

    def __init__(self, algebra: BlobAlgebra):
        self.algebra = A = algebra
        params = A.params
        self.params = params
        p, q, e, n = A.p, A.q, A.e, params.n
        self.p, self.q, self.e, self.n = p, q, e, n
        nf = generic_normal_form(params)
        classes = class_partition(params)
        self.classes = classes
        self.E: dict = {}
        for iseq in sorted(classes):
            vec = specialize_vector(
                class_idempotent_vector(params, nf, classes[iseq]), params)
            M = A.push(vec)
            if M.any():
                self.E[iseq] = M
        I = A.identity
        self.Y = {}
        for k in range(1, n + 1):
            Yk = np.zeros_like(I)
            for iseq, Ei in self.E.items():
                Yk = (Yk + (I - pow(q, -iseq[k - 1], p) * A.L[k])
                      @ Ei) % p
            self.Y[k] = Yk
        self.PSI = {r: self._psi(r) for r in range(1, n)}
        self._sigma = None

    # -- the anti-involution fixing the generator images ------------------

    def _rmat(self, v: np.ndarray) -> np.ndarray:
        """Right-multiplication matrix of the element with coordinate
        vector v (via the Hecke-side anti-involution, used here purely as
        linear algebra)."""
        A = self.algebra
        return A.star @ A.lmat(A.star @ v % self.p) @ A.star % self.p

    @property
    def sigma(self) -> np.ndarray:
        """Matrix of the anti-involution that fixes e(i), y_k, psi_r.

        Built by spanning the algebra with words in the generator images:
        a word and its reversal are star-images of each other.  The result
        is certified by :meth:`relation_failures` (involution,
        anti-multiplicativity, generator fixing)."""
        if self._sigma is None:
            A, p = self.algebra, self.p
            gens = [Ei for _, Ei in sorted(self.E.items())]
            gens += [self.Y[k] for k in sorted(self.Y)]
            gens += [self.PSI[r] for r in sorted(self.PSI)]
            rgens = [self._rmat(G @ A.unit % p) for G in gens]
            space = RowSpace(A.dim, p)
            space.add(A.unit)
            cols, rcols = [A.unit], [A.unit]
            frontier = [(A.unit, A.unit)]
            while len(cols) < A.dim and frontier:
                nxt = []
                for v, vr in frontier:
                    for G, RG in zip(gens, rgens):
                        w = G @ v % p
                        if not space.add(w):
                            continue
                        wr = RG @ vr % p
                        cols.append(w)
                        rcols.append(wr)
                        nxt.append((w, wr))
                        if len(cols) == A.dim:
                            break
                    if len(cols) == A.dim:
                        break
                frontier = nxt
            if len(cols) < A.dim:
                raise ValueError("generator images do not span the algebra")
            W = np.array(cols, dtype=np.int64).T % p
            Wr = np.array(rcols, dtype=np.int64).T % p
            self._sigma = Wr @ invert_matrix(W, p) % p
        return self._sigma

    # -- block-wise rational calculus ------------------------------------

    def _block_inv(self, M: np.ndarray, E: np.ndarray) -> np.ndarray:
        """Inverse of M on the image of the idempotent E (M must commute
        with E and be invertible there), times E."""
        p = self.p
        A = (M @ E + self.algebra.identity - E) % p
        return invert_matrix(A, p) @ E % p

    def _psi_block(self, r: int, iseq) -> np.ndarray:
        A, p, q, e = self.algebra, self.p, self.q, self.e
        Ei = self.E[iseq]
        ir, ir1 = iseq[r - 1], iseq[r]
        I = A.identity
        x, z = A.L[r], A.L[r + 1]
        if ir == ir1:
            # same residue on both strands: (T_r + 1) against the
            # invertible part of the quadratic relation on the block
            den = ((q - 1) * I + (I - pow(q, -ir, p) * x)
                   - q * (I - pow(q, -ir1, p) * z)) % p
            return (A.T[r] + I) @ self._block_inv(den, Ei) % p
        # distinct residues: intertwiner against a case normalizer
        U = (A.T[r] @ Ei - (q - 1) * z @ self._block_inv((z - x) % p, Ei)) % p
        d = (ir1 - ir) % e
        if d == 1:
            N = (x - q * z) @ self._block_inv((z - x) % p, Ei) % p
        elif d == e - 1:
            N = pow(q, ir, p) * self._block_inv((x - z) % p, Ei) % p
        else:
            N = (q * x - z) @ self._block_inv((z - x) % p, Ei) % p
        return U @ self._block_inv(N, Ei) % p

    def _psi(self, r: int) -> np.ndarray:
        out = np.zeros_like(self.algebra.identity)
        for iseq in self.E:
            out = (out + self._psi_block(r, iseq)) % self.p
        return out

    def psi_of(self, word) -> np.ndarray:
        """Product of crossing images along a word, in order."""
        out = self.algebra.identity
        for r in word:
            out = out @ self.PSI[r] % self.p
        return out

    # -- relation suite ---------------------------------------------------

    def relation_failures(self, blob_defining: bool | None = None
                          ) -> list[RelationFailure]:
        """Exact check of every defining relation; ``blob_defining``
        controls whether the vanishing pattern that distinguishes the
        quotient from the full quiver-Hecke algebra is included (defaults
        to the carrier being the quotient)."""
        if blob_defining is None:
            blob_defining = self.algebra.is_quotient
        A, p, q, e, n = self.algebra, self.p, self.q, self.e, self.n
        I = A.identity
        kap = set(k % e for k in self.params.mc.kappa)
        fails: list[RelationFailure] = []

        def check(name, lhs, rhs, witness):
            if not np.array_equal(lhs % p, rhs % p):
                fails.append(RelationFailure(name, witness))

        zero = np.zeros_like(I)
        total = zero
        for iseq, Ei in self.E.items():
            total = (total + Ei) % p
            for jseq, Ej in self.E.items():
                tgt = Ei if iseq == jseq else zero
                check("e(i)e(j) = delta e(i)", Ei @ Ej % p, tgt,
                      (iseq, jseq))
            if iseq[0] % e not in kap:
                fails.append(RelationFailure(
                    "e(i) = 0 for unsupported first residue", iseq))
            if blob_defining and n >= 2 and \
                    iseq[1] % e == (iseq[0] + 1) % e:
                fails.append(RelationFailure(
                    "e(i) = 0 for second residue one above the first",
                    iseq))
            check("y_1 e(i) = 0", self.Y[1] @ Ei % p, zero, iseq)
        check("sum of e(i) = 1", total, I, "all")
        for k in self.Y:
            for m in self.Y:
                check("y_k y_m commute", self.Y[k] @ self.Y[m] % p,
                      self.Y[m] @ self.Y[k] % p, (k, m))
            for iseq, Ei in self.E.items():
                check("y_k e(i) = e(i) y_k", self.Y[k] @ Ei % p,
                      Ei @ self.Y[k] % p, (k, iseq))
            check("y_k nilpotent", _mat_pow(self.Y[k], A.dim + 1, p),
                  zero, k)
        fails += self._sigma_failures()
        for r in self.PSI:
            P = self.PSI[r]
            for s in self.PSI:
                if abs(r - s) > 1:
                    check("distant psi commute", P @ self.PSI[s] % p,
                          self.PSI[s] @ P % p, (r, s))
            for k in self.Y:
                if k not in (r, r + 1):
                    check("psi_r y_k commute", P @ self.Y[k] % p,
                          self.Y[k] @ P % p, (r, k))
            for iseq, Ei in self.E.items():
                ir, ir1 = iseq[r - 1], iseq[r]
                jseq = list(iseq)
                jseq[r - 1], jseq[r] = jseq[r], jseq[r - 1]
                Ej = self.E.get(tuple(jseq), zero)
                PE = P @ Ei % p
                check("psi_r e(i) = e(s_r i) psi_r", PE, Ej @ PE % p,
                      (r, iseq))
                delta = I if ir == ir1 else zero
                check("psi_r y_{r+1} e(i) = (y_r psi_r + delta) e(i)",
                      P @ self.Y[r + 1] @ Ei % p,
                      (self.Y[r] @ P + delta) @ Ei % p, (r, iseq))
                check("y_{r+1} psi_r e(i) = (psi_r y_r + delta) e(i)",
                      self.Y[r + 1] @ P @ Ei % p,
                      (P @ self.Y[r] + delta) @ Ei % p, (r, iseq))
                d = (ir1 - ir) % e
                if ir == ir1:
                    rhs = zero
                elif d == 1:
                    rhs = (self.Y[r + 1] - self.Y[r]) @ Ei % p
                elif d == e - 1:
                    rhs = (self.Y[r] - self.Y[r + 1]) @ Ei % p
                else:
                    rhs = Ei
                check("psi_r^2 e(i)", P @ P @ Ei % p, rhs, (r, iseq))
        for r in range(1, n - 1):
            P, Pn = self.PSI[r], self.PSI[r + 1]
            lhs = (P @ Pn @ P - Pn @ P @ Pn) % p
            for iseq, Ei in self.E.items():
                a, b, c = iseq[r - 1], iseq[r], iseq[r + 1]
                if a == c and b % e == (a + 1) % e:
                    rhs = (-Ei) % p
                elif a == c and b % e == (a - 1) % e:
                    rhs = Ei
                else:
                    rhs = zero
                check("braid correction", lhs @ Ei % p, rhs, (r, iseq))
        return fails

    def _sigma_failures(self) -> list[RelationFailure]:
        """Certify the anti-involution: squares to the identity, fixes
        every generator, and reverses random products."""
        A, p = self.algebra, self.p
        fails = []
        try:
            S = self.sigma
        except ValueError as exc:
            return [RelationFailure("anti-involution exists", str(exc))]
        if not np.array_equal(S @ S % p, A.identity):
            fails.append(RelationFailure("star is an involution", "sigma"))
        named = [(f"e({i})", Ei) for i, Ei in self.E.items()]
        named += [(f"y_{k}", self.Y[k]) for k in self.Y]
        named += [(f"psi_{r}", self.PSI[r]) for r in self.PSI]
        for name, G in named:
            v = G @ A.unit % p
            if not np.array_equal(S @ v % p, v):
                fails.append(RelationFailure("star fixes the generators",
                                             name))
        rng = np.random.default_rng(20260826)
        for _ in range(5):
            x = rng.integers(0, p, A.dim)
            y = rng.integers(0, p, A.dim)
            lhs = S @ (A.lmat(x) @ y % p) % p
            rhs = A.lmat(S @ y % p) @ (S @ x % p) % p
            if not np.array_equal(lhs, rhs):
                fails.append(RelationFailure(
                    "star reverses products", "random pair"))
                break
        return fails

    def eigenprojection_failures(self) -> list[str]:
        """Cross-check: e(i) must be the projection onto the simultaneous
        generalized eigenspace of (L_1..L_n) at (q^{i_1},..,q^{i_n})."""
        A, p, q, n = self.algebra, self.p, self.q, self.n
        I = A.identity
        spaces = {}
        for iseq in self.E:
            Ms = [_mat_pow((A.L[k] - pow(q, iseq[k - 1], p) * I) % p,
                           A.dim, p) for k in range(1, n + 1)]
            spaces[iseq] = nullspace(np.vstack(Ms), p)
        fails = []
        if sum(V.shape[0] for V in spaces.values()) != A.dim:
            fails.append("generalized eigenspaces do not fill the algebra")
        for iseq, Ei in self.E.items():
            for jseq, V in spaces.items():
                got = Ei @ V.T % p
                want = V.T % p if iseq == jseq else np.zeros_like(got)
                if not np.array_equal(got, want):
                    fails.append(f"e({iseq}) is not the projection onto "
                                 f"the eigenspace of {jseq}")
        return fails

    def degree_violations(self) -> list[str]:
        """Homogeneity of every defining relation under the degree table
        (0 for idempotents, 2 for dots, -2/1/0 for crossings), checked
        combinatorially over the realized residue sequences."""
        e = self.e
        out = []
        for iseq in self.E:
            for r in range(1, self.n):
                ir, ir1 = iseq[r - 1], iseq[r]
                d = comb.psi_degree(ir, ir1, e)
                # dot-exchange: psi y' and y psi share degree d + 2; the
                # correction term has degree 0 and appears iff residues match
                if ir == ir1 and d + 2 != 0:
                    out.append(f"dot-exchange inhomogeneous at {iseq}, {r}")
                # square: degree 2d must match the correction terms
                dd = (ir1 - ir) % e
                if dd in (1, e - 1) and 2 * d != 2:
                    out.append(f"square inhomogeneous at {iseq}, {r}")
                if ir != ir1 and dd not in (1, e - 1) and 2 * d != 0:
                    out.append(f"square inhomogeneous at {iseq}, {r}")
            for r in range(1, self.n - 1):
                w1, w2 = (r, r + 1, r), (r + 1, r, r + 1)
                d1 = comb.word_degree(iseq, w1, e)
                d2 = comb.word_degree(iseq, w2, e)
                if d1 != d2:
                    out.append(f"braid inhomogeneous at {iseq}, {r}")
                a, b, c = iseq[r - 1], iseq[r], iseq[r + 1]
                if a == c and (b - a) % e in (1, e - 1) and d1 != 0:
                    out.append(f"braid correction inhomogeneous at "
                               f"{iseq}, {r}")
        return out


def klr_images(algebra: BlobAlgebra) -> KLRImages:
    """Build the generator images and certify the full relation suite;
    raises :class:`RelationFailure` on the first violation."""
    images = KLRImages(algebra)
    fails = images.relation_failures()
    if fails:
        raise fails[0]
    return images


def jm_images(algebra: BlobAlgebra, images: KLRImages) -> dict:
    """The Jucys-Murphy elements, rebuilt from the generator images as
    ``JM_k = sum_i q^{i_k} (1 - y_k) e(i)`` and cross-checked against the
    quotient images of the L_k."""
    A, p, q = algebra, algebra.p, algebra.q
    I = A.identity
    jm = {}
    for k in range(1, A.params.n + 1):
        M = np.zeros_like(I)
        for iseq, Ei in images.E.items():
            M = (M + pow(q, iseq[k - 1], p) * ((I - images.Y[k]) @ Ei)) % p
        if not np.array_equal(M, A.L[k]):
            raise ValueError(f"rebuilt Jucys-Murphy element {k} differs "
                             f"from the image of L_{k}")
        v = M @ A.unit % p
        if not np.array_equal(images.sigma @ v % p, v):
            raise ValueError(f"Jucys-Murphy element {k} is not star-fixed")
        jm[k] = M
    for k in jm:
        for m in jm:
            if not np.array_equal(jm[k] @ jm[m] % p, jm[m] @ jm[k] % p):
                raise ValueError(f"Jucys-Murphy elements {k}, {m} do not "
                                 f"commute")
    return jm


# ---------------------------------------------------------------------------
# The cellular basis
# ---------------------------------------------------------------------------


@dataclass
class CellModule:
    """A cell module: basis indexed by the standard tableaux of its shape,
    generator action matrices, and the Gram matrix of the bilinear form."""
    shape: tuple
    tableaux: list
    action: dict
    gram: np.ndarray
    gram_rank: int

    @property
    def dim(self) -> int:
        return len(self.tableaux)

    @property
    def radical_dim(self) -> int:
        return self.dim - self.gram_rank


class CellularBasis:
    """The homogeneous basis ``m_{S,T}`` of B, indexed by pairs of standard
    tableaux of a common one-column shape: the star of the crossing word of
    d(S), the class idempotent of the shape's maximal residue sequence, and
    the crossing word of d(T)."""

    def __init__(self, algebra: BlobAlgebra, images: KLRImages,
                 theta=None):
        self.algebra = A = algebra
        self.images = images
        params = A.params
        self.params = params
        p = A.p
        l, n = params.l, params.n
        self.theta = comb.theta_zero(l) if theta is None else theta
        self.mc = params.mc
        self.shapes = comb.one_column_shapes(n, l)
        self.i_lam = {lam: comb.i_lambda(lam, self.mc)
                      for lam in self.shapes}
        self.std = {lam: comb.std_tableaux(lam) for lam in self.shapes}
        self.t_lam = {lam: comb.t_lambda(lam, self.theta)
                      for lam in self.shapes}
        self.index: list[tuple] = []   # (shape, S, T)
        self.column: dict = {}
        self.word = {}
        cols = []
        for lam in self.shapes:
            for S in self.std[lam]:
                self.word[S] = comb.official_word(
                    comb.d_perm(S, self.theta))
        psi_cache: dict = {}

        def psi_mat(word):
            if word not in psi_cache:
                psi_cache[word] = images.psi_of(word)
            return psi_cache[word]

        for lam in self.shapes:
            Elam = images.E[self.i_lam[lam]]
            for S in self.std[lam]:
                left = psi_mat(tuple(reversed(self.word[S])))
                for T in self.std[lam]:
                    v = left @ Elam @ psi_mat(self.word[T]) @ A.unit % p
                    self.column[(S, T)] = len(self.index)
                    self.index.append((lam, S, T))
                    cols.append(v)
        self.matrix = np.array(cols, dtype=np.int64).T % p
        if len(self.index) != A.dim or \
                rank(self.matrix, p) != A.dim:
            raise ValueError(
                f"cellular family of size {len(self.index)} has rank "
                f"{rank(self.matrix, p)}, expected {A.dim}")
        self._inv = invert_matrix(self.matrix, p)
        # strictly-dominating shape comparisons, for the cell order
        self._above = {
            lam: {mu for mu in self.shapes
                  if comb.strictly_dominates(mu, lam, self.theta)}
            for lam in self.shapes}

    def vector(self, S, T) -> np.ndarray:
        return self.matrix[:, self.column[(S, T)]]

    def expand(self, v: np.ndarray) -> np.ndarray:
        """Coefficients of a coordinate vector on the cellular basis."""
        return self._inv @ (np.asarray(v, dtype=np.int64) % self.algebra.p) \
            % self.algebra.p

    def degree(self, S, T) -> int:
        lam = comb.shape_of(S)
        ilam = self.i_lam[lam]
        return comb.word_degree(ilam, self.word[S], self.params.e) + \
            comb.word_degree(ilam, self.word[T], self.params.e)


def build_cellular_basis(algebra: BlobAlgebra, images: KLRImages,
                         theta=None) -> CellularBasis:
    """Construct and certify the cellular basis: full rank, star-symmetry,
    and the maximal-pair normalization m_{T^lam, T^lam} = e(i^lam)."""
    basis = CellularBasis(algebra, images, theta)
    A, p = algebra, algebra.p
    for lam in basis.shapes:
        tl = basis.t_lam[lam]
        want = images.E[basis.i_lam[lam]] @ A.unit % p
        if not np.array_equal(basis.vector(tl, tl), want):
            raise ValueError(f"maximal pair at shape {lam} is not the "
                             f"class idempotent")
    sig = images.sigma
    for lam, S, T in basis.index:
        if not np.array_equal(sig @ basis.vector(S, T) % p,
                              basis.vector(T, S)):
            raise ValueError(f"star does not swap the pair at {lam}")
    return basis


# ---------------------------------------------------------------------------
# Cellularity, Jucys-Murphy triangularity, grading
# ---------------------------------------------------------------------------


def _named_generators(images: KLRImages) -> list[tuple[str, np.ndarray]]:
    out = [(f"e({iseq})", Ei) for iseq, Ei in images.E.items()]
    out += [(f"y_{k}", images.Y[k]) for k in images.Y]
    out += [(f"psi_{r}", images.PSI[r]) for r in images.PSI]
    return out


def check_cellularity(algebra: BlobAlgebra, basis: CellularBasis,
                      elements=None) -> list[str]:
    """Condition (ii) of cellularity, with exact coefficients: for each
    generator a and each S, the coefficients of a.m_{S,T} on same-shape
    basis pairs must be r_{u,S,a} on column (u, T) -- extracted once at
    T = T^lam and reproduced for every other T -- with everything else
    supported on strictly dominating shapes.  Also checks that every
    nonzero expansion term of psi_r . m is concentrated in a single
    degree, deg a + deg m."""
    A, p = algebra, algebra.p
    images = basis.images
    if elements is None:
        elements = _named_generators(images)
    report = []
    N = len(basis.index)
    for name, M in elements:
        for lam in basis.shapes:
            std = basis.std[lam]
            tl = basis.t_lam[lam]
            above = basis._above[lam]
            for S in std:
                ref = basis.expand(M @ basis.vector(S, tl) % p)
                r_u = {u: ref[basis.column[(u, tl)]] for u in std}
                for T in std:
                    c = basis.expand(M @ basis.vector(S, T) % p)
                    for idx, (mu, U, V) in enumerate(basis.index):
                        want = None
                        if mu in above:
                            continue
                        if mu == lam and V == T:
                            want = r_u[U]
                        else:
                            want = 0
                        if c[idx] % p != want % p:
                            report.append(
                                f"{name} at (S, T) = ({S}, {T}): "
                                f"coefficient on ({U}, {V}) is {c[idx]}, "
                                f"expected {want}")
                            break
    report += _grading_violations(algebra, basis)
    return report


def _grading_violations(algebra: BlobAlgebra, basis: CellularBasis
                        ) -> list[str]:
    A, p = algebra, algebra.p
    images = basis.images
    e = basis.params.e
    degs = np.array([basis.degree(S, T) for _, S, T in basis.index])
    report = []
    elements = [(f"y_{k}", 2, images.Y[k]) for k in images.Y]
    elements += [(f"e({i})", 0, Ei) for i, Ei in images.E.items()]
    for name, d_a, M in elements:
        for lam, S, T in basis.index:
            c = basis.expand(M @ basis.vector(S, T) % p)
            target = basis.degree(S, T) + d_a
            for idx in np.nonzero(c % p)[0]:
                if degs[idx] != target:
                    report.append(
                        f"{name}.m_({S},{T}) has a component of degree "
                        f"{degs[idx]}, expected {target}")
    for r in images.PSI:
        for lam, S, T in basis.index:
            iS = comb.residue_seq(S, basis.mc)
            d_a = comb.psi_degree(iS[r - 1], iS[r], e)
            c = basis.expand(images.PSI[r] @ basis.vector(S, T) % p)
            target = basis.degree(S, T) + d_a
            for idx in np.nonzero(c % p)[0]:
                if degs[idx] != target:
                    report.append(
                        f"psi_{r}.m_({S},{T}) has a component of degree "
                        f"{degs[idx]}, expected {target}")
    return report


def check_jm(algebra: BlobAlgebra, basis: CellularBasis, jm: dict
             ) -> list[str]:
    """Triangularity of the Jucys-Murphy action on the cellular basis:
    acting on the right of m_{S,T}, JM_k has diagonal coefficient
    q^{residue of k in T} and otherwise moves T strictly up in dominance
    (modulo strictly dominating shapes); symmetrically on the left for S."""
    A, p, q = algebra, algebra.p, algebra.q
    report = []
    theta = basis.theta
    for k in jm:
        right = A.RL[k]
        left = A.L[k]
        for lam, S, T in basis.index:
            above = basis._above[lam]
            for side, Mv, moved, fixed in (
                    ("right", right @ basis.vector(S, T) % p, T, S),
                    ("left", left @ basis.vector(S, T) % p, S, T)):
                c = basis.expand(Mv)
                res = comb.residue_seq(moved, basis.mc)[k - 1]
                diag = pow(q, res, p)
                for idx, (mu, U, V) in enumerate(basis.index):
                    if mu in above or c[idx] % p == 0:
                        continue
                    Umoved, Ufixed = (V, U) if side == "right" else (U, V)
                    ok = (mu == lam and Ufixed == fixed and
                          (Umoved == moved or
                           comb.tableau_strictly_dominates(
                               Umoved, moved, theta)))
                    if not ok:
                        report.append(
                            f"JM_{k} {side} on ({S}, {T}): stray "
                            f"component on ({U}, {V})")
                        continue
                    if Umoved == moved and c[idx] % p != diag:
                        report.append(
                            f"JM_{k} {side} on ({S}, {T}): diagonal "
                            f"coefficient {c[idx]}, expected {diag}")
    return report


def cell_modules(algebra: BlobAlgebra, basis: CellularBasis
                 ) -> list[CellModule]:
    """Cell modules with generator action (coefficients r_{u,S,a} read off
    at T = T^lam) and Gram matrices extracted from products of half-basis
    elements; raises on any coefficient outside the allowed support."""
    A, p = algebra, algebra.p
    images = basis.images
    out = []
    for lam in basis.shapes:
        std = basis.std[lam]
        tl = basis.t_lam[lam]
        above = basis._above[lam]
        col_tt = basis.column[(tl, tl)]
        action = {}
        for name, M in _named_generators(images):
            mat = np.zeros((len(std), len(std)), dtype=np.int64)
            for j, S in enumerate(std):
                c = basis.expand(M @ basis.vector(S, tl) % p)
                for i, U in enumerate(std):
                    mat[i, j] = c[basis.column[(U, tl)]] % p
            action[name] = mat
        gram = np.zeros((len(std), len(std)), dtype=np.int64)
        for a, S in enumerate(std):
            left = A.lmat(basis.vector(tl, S))
            for b, T in enumerate(std):
                prod = left @ basis.vector(T, tl) % p
                c = basis.expand(prod)
                gram[a, b] = c[col_tt] % p
                for idx, (mu, U, V) in enumerate(basis.index):
                    if mu in above or c[idx] % p == 0 or idx == col_tt:
                        continue
                    raise ValueError(
                        f"half-basis product at shape {lam} has a stray "
                        f"component on ({U}, {V})")
        if not np.array_equal(gram, gram.T):
            raise ValueError(f"Gram matrix at shape {lam} is not symmetric")
        out.append(CellModule(shape=lam, tableaux=std, action=action,
                              gram=gram, gram_rank=rank(gram, p)))
    if sum(m.dim ** 2 for m in out) != A.dim:
        raise ValueError("cell-module dimensions do not account for the "
                         "algebra dimension")
    return out

"""Cyclotomic Hecke algebras of type G(l,1,n) in two exact models.

Two complementary realizations are provided.

* A *normal-form* model: the algebra is free with basis
  ``L_1^{a_1} ... L_n^{a_n} T_w`` (0 <= a_k < l, w in S_n), and left
  multiplication by the generators is implemented by exact rewriting.
  The scalar ring is pluggable: integers mod p (specialized), or
  polynomials / rational functions in a parameter t over F_p (generic).
  In the generic mode the parameter is q-hat = t and the cyclotomic
  roots are t^{hat_kappa_j}; specializing t at a primitive e-th root of
  unity q recovers the mod-p algebra.

* A *seminormal* block model over the rational function field: one
  block per multipartition of n, with basis indexed by standard
  tableaux, the L_k acting diagonally through contents and the T_r
  acting through the classical two-term formulas.

On top of these sit the tableau idempotents F_S (product formula), the
residue-class idempotents E_[i] (which are pole-free at t = q and
specialize into the mod-p algebra), and the rank-one idempotents of the
two-row/two-string subalgebra used to present the blob quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import factorial

import numpy as np
from scipy import sparse

from . import combinatorics as comb
from .exactfield import (
    Poly,
    PoleAtSpecialization,
    RatFunc,
    is_prime,
    element_order,
    invert_matrix,
    nullspace,
    root_of_unity,
)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeckeParams:
    """Numerical data for one algebra: size n, level l, quantum
    characteristic e, coefficient prime p, root of unity q, and the
    integral multicharge."""

    n: int
    l: int
    e: int
    p: int
    q: int
    hat_kappa: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if element_order(self.q % self.p, self.p) != self.e:
            raise ValueError(f"q = {self.q} does not have order {self.e} mod {self.p}")
        if len(self.hat_kappa) != self.l:
            raise ValueError("multicharge length differs from the level")

    @property
    def mc(self) -> comb.Multicharge:
        return comb.Multicharge(tuple(self.hat_kappa), self.e)

    @property
    def kappa(self) -> tuple[int, ...]:
        return self.mc.kappa

    def validate(self) -> None:
        """Raise ValueError naming the violated multicharge condition."""
        mc = self.mc
        kap = mc.kappa
        for i in range(self.l - 1):
            if self.hat_kappa[i + 1] - self.hat_kappa[i] < self.n:
                raise ValueError(
                    "multicharge condition i) violated: consecutive entries "
                    f"{self.hat_kappa[i]}, {self.hat_kappa[i + 1]} differ by less than n = {self.n}"
                )
        for i in range(self.l):
            for j in range(self.l):
                if i != j and (kap[i] - kap[j]) % self.e in (0, 1, self.e - 1):
                    raise ValueError(
                        "multicharge condition ii) violated: residues "
                        f"{kap[i]}, {kap[j]} are equal or adjacent mod e"
                    )
        if self.l > 1 and kap[0] % self.e == (kap[-1] + 2) % self.e:
            raise ValueError(
                "multicharge condition iii) violated: first residue equals last + 2 mod e"
            )
        if any(kap[i] >= kap[i + 1] for i in range(self.l - 1)):
            raise ValueError(
                "multicharge condition iv) violated: residues not strictly increasing"
            )


_DEFAULTS = {
    2: {"e": 5, "p": 11, "kappa": (0, 2)},
    3: {"e": 7, "p": 29, "kappa": (0, 2, 4)},
}


def default_params(n: int, l: int, e: int | None = None, p: int | None = None,
                   q: int | None = None,
                   hat_kappa: tuple[int, ...] | None = None) -> HeckeParams:
    """Presets for levels 2 and 3; any field can be overridden."""
    preset = _DEFAULTS.get(l, {})
    if e is None:
        e = preset.get("e")
    if e is None:
        raise ValueError(f"no preset for level {l}; pass e, p, hat_kappa explicitly")
    if p is None:
        p = preset.get("p")
        if p is None or (p - 1) % e:
            raise ValueError(f"no preset prime with e | p-1 for level {l}")
    if q is None:
        q = root_of_unity(p, e)
    if hat_kappa is None:
        kap = preset.get("kappa")
        if kap is None:
            kap = tuple(2 * j for j in range(l))
        # lift residues to a widely separated increasing multicharge
        lift = []
        lo = 0
        for r in kap:
            k = r + e * max(0, -(-(lo - r) // e))
            while k < lo:
                k += e
            lift.append(k)
            lo = k + max(n, 1)
        hat_kappa = tuple(lift)
    params = HeckeParams(n=n, l=l, e=e, p=p, q=q % p, hat_kappa=tuple(hat_kappa))
    params.validate()
    return params


# ---------------------------------------------------------------------------
# Scalar backends
# ---------------------------------------------------------------------------


class FpScalars:
    """Integers mod p."""

    def __init__(self, p: int):
        self.p = p
        self.zero = 0
        self.one = 1

    def from_int(self, k: int) -> int:
        return k % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def inv(self, x):
        return pow(x, -1, self.p)

    def is_zero(self, x) -> bool:
        return x % self.p == 0


class PolyScalars:
    """F_p[t]; no division, used for denominator-free generic runs."""

    def __init__(self, p: int):
        self.p = p
        self.zero = Poly.const(p, 0)
        self.one = Poly.const(p, 1)

    def from_int(self, k: int) -> Poly:
        return Poly.const(self.p, k)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def is_zero(self, x) -> bool:
        return x.is_zero()


class RatScalars:
    """F_p(t)."""

    def __init__(self, p: int):
        self.p = p
        self.zero = RatFunc.const(p, 0)
        self.one = RatFunc.const(p, 1)

    def from_int(self, k: int) -> RatFunc:
        return RatFunc.const(self.p, k)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        return x.inverse()

    def is_zero(self, x) -> bool:
        return x.is_zero()


def tpow(p: int, m: int) -> RatFunc:
    """t^m in F_p(t), any sign of m."""
    if m >= 0:
        return RatFunc.of_poly(Poly.monomial(p, 1, m))
    return RatFunc.make(Poly.const(p, 1), Poly.monomial(p, 1, -m))


# ---------------------------------------------------------------------------
# Normal-form model
# ---------------------------------------------------------------------------


class NormalForm:
    """The free model on the basis L^a T_w with rewriting-based left
    multiplication by the generators.  Elements are dicts mapping basis
    keys (a, w) to scalars of the chosen backend."""

    def __init__(self, n: int, l: int, sc, q, Q):
        self.n = n
        self.l = l
        self.sc = sc
        self.q = q
        self.Q = list(Q)
        if len(self.Q) != l:
            raise ValueError("need l cyclotomic parameters")
        self.perms = sorted(permutations(range(1, n + 1)))
        self.exps = list(product(range(l), repeat=n))
        self.basis = [(a, w) for a in self.exps for w in self.perms]
        self.index = {key: j for j, key in enumerate(self.basis)}
        self.dim = l ** n * factorial(n)
        self.identity_key = ((0,) * n, comb.perm_identity(n))
        self.qm1 = sc.sub(q, sc.one)
        # expand prod_j (x - Q_j) = x^l + sum_j cyclo_neg[j] x^j, so that
        # x^l = sum_j cyclo[j] x^j with cyclo[j] = -cyclo_neg[j]
        coeffs = [sc.one]
        for Qj in self.Q:
            nxt = [sc.zero] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d + 1] = sc.add(nxt[d + 1], c)
                nxt[d] = sc.sub(nxt[d], sc.mul(c, Qj))
            coeffs = nxt
        self.cyclo = [sc.neg(coeffs[j]) for j in range(l)]
        self._lengths = {w: comb.perm_length(w) for w in self.perms}

    # -- element helpers ----------------------------------------------------

    def unit(self):
        return {self.identity_key: self.sc.one}

    def unit_at(self, key):
        return {key: self.sc.one}

    def _accum(self, out, key, c):
        if key in out:
            s = self.sc.add(out[key], c)
            if self.sc.is_zero(s):
                del out[key]
            else:
                out[key] = s
        elif not self.sc.is_zero(c):
            out[key] = c

    def add(self, x, y):
        out = dict(x)
        for key, c in y.items():
            self._accum(out, key, c)
        return out

    def scale(self, c, x):
        if self.sc.is_zero(c):
            return {}
        return {key: self.sc.mul(c, v) for key, v in x.items()}

    def sub(self, x, y):
        return self.add(x, self.scale(self.sc.neg(self.sc.one), y))

    def equal(self, x, y) -> bool:
        return not self.sub(x, y)

    # -- left multiplication by generators ----------------------------------

    def lmul_t(self, i: int, el):
        """Left multiply by T_i, 1 <= i <= n-1."""
        sc, n = self.sc, self.n
        si = comb.simple(n, i)
        out: dict = {}
        for (a, w), c in el.items():
            alpha, beta = a[i - 1], a[i]
            terms = []  # (exponents, coeff, carries a T_i factor)
            swapped = list(a)
            swapped[i - 1], swapped[i] = beta, alpha
            terms.append((tuple(swapped), c, True))
            if alpha > beta:
                cc = sc.neg(sc.mul(c, self.qm1))
                for j in range(alpha - beta):
                    ex = list(a)
                    ex[i - 1], ex[i] = beta + j, alpha - j
                    terms.append((tuple(ex), cc, False))
            elif alpha < beta:
                cc = sc.mul(c, self.qm1)
                for j in range(beta - alpha):
                    ex = list(a)
                    ex[i - 1], ex[i] = alpha + j, beta - j
                    terms.append((tuple(ex), cc, False))
            for ex, cc, with_t in terms:
                if not with_t:
                    self._accum(out, (ex, w), cc)
                    continue
                siw = comb.perm_mult(si, w)
                if self._lengths[siw] > self._lengths[w]:
                    self._accum(out, (ex, siw), cc)
                else:
                    self._accum(out, (ex, siw), sc.mul(self.q, cc))
                    self._accum(out, (ex, w), sc.mul(self.qm1, cc))
        return out

    def lmul_l1(self, el):
        """Left multiply by L_1, folding the cyclotomic relation."""
        out: dict = {}
        for (a, w), c in el.items():
            if a[0] + 1 < self.l:
                self._accum(out, ((a[0] + 1,) + a[1:], w), c)
            else:
                for j in range(self.l):
                    self._accum(out, ((j,) + a[1:], w),
                                self.sc.mul(c, self.cyclo[j]))
        return out

    def lmul_l_unnorm(self, k: int, el):
        """Left multiply by q^{k-1} L_k = T_{k-1}...T_1 L_1 T_1...T_{k-1}.

        Denominator-free, hence valid over the polynomial backend."""
        for i in range(k - 1, 0, -1):
            el = self.lmul_t(i, el)
        el = self.lmul_l1(el)
        for i in range(1, k):
            el = self.lmul_t(i, el)
        return el

    def lmul_l(self, k: int, el):
        """Left multiply by L_k (needs invertible scalars for k > 1)."""
        el = self.lmul_l_unnorm(k, el)
        if k > 1:
            qinv = self.sc.inv(self.q)
            c = self.sc.one
            for _ in range(k - 1):
                c = self.sc.mul(c, qinv)
            el = self.scale(c, el)
        return el

    def lmul_word(self, word, el):
        """Left multiply by T_{word} = T_{word[0]} ... T_{word[-1]}."""
        for i in reversed(word):
            el = self.lmul_t(i, el)
        return el

    def lmul_basis(self, key, el):
        """Left multiply by the basis element L^a T_w."""
        a, w = key
        el = self.lmul_word(comb.official_word(w), el)
        for k in range(self.n, 0, -1):
            for _ in range(a[k - 1]):
                el = self.lmul_l(k, el)
        return el

    def multiply(self, x, y):
        out: dict = {}
        for key, c in x.items():
            out = self.add(out, self.scale(c, self.lmul_basis(key, y)))
        return out

    def star(self, el):
        """The anti-involution fixing every T_i and L_k."""
        out: dict = {}
        for (a, w), c in el.items():
            piece = self.unit_at((a, comb.perm_identity(self.n)))
            piece = self.lmul_word(comb.official_word(comb.perm_inverse(w)), piece)
            out = self.add(out, self.scale(c, piece))
        return out


# ---------------------------------------------------------------------------
# Specialized regular representation (mod p, numpy matrices)
# ---------------------------------------------------------------------------


class RegularRep:
    """Left regular representation of the specialized algebra over F_p,
    as dense integer matrices mod p."""

    def __init__(self, params: HeckeParams):
        params.validate()
        self.params = params
        p, q = params.p, params.q
        sc = FpScalars(p)
        Q = [pow(q, kj, p) for kj in params.mc.kappa]
        self.nf = NormalForm(params.n, params.l, sc, q % p, Q)
        self.dim = self.nf.dim
        self.p = p
        self.id_index = self.nf.index[self.nf.identity_key]
        self.T = {i: self._gen_matrix(lambda el, i=i: self.nf.lmul_t(i, el))
                  for i in range(1, params.n)}
        self.L = {k: self._gen_matrix(lambda el, k=k: self.nf.lmul_l(k, el))
                  for k in range(1, params.n + 1)}
        self.star_mat = self._gen_matrix(self.nf.star)
        # right multiplication via x*z = (z* x*)*
        self.RT = {i: self.star_mat @ self.T[i] @ self.star_mat % p
                   for i in self.T}
        self.RL = {k: self.star_mat @ self.L[k] @ self.star_mat % p
                   for k in self.L}
        self._word_cache: dict = {}

    def _gen_matrix(self, op) -> np.ndarray:
        D = self.dim
        M = np.zeros((D, D), dtype=np.int64)
        for j, key in enumerate(self.nf.basis):
            for out_key, c in op(self.nf.unit_at(key)).items():
                M[self.nf.index[out_key], j] = c % self.p
        return M

    def mm(self, *mats) -> np.ndarray:
        out = mats[0]
        for M in mats[1:]:
            out = (out @ M) % self.p
        return out

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.int64)

    def unit_vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.id_index] = 1
        return v

    def t_word_matrix(self, word: tuple[int, ...]) -> np.ndarray:
        if word in self._word_cache:
            return self._word_cache[word]
        M = self.identity()
        for i in word:
            M = self.mm(M, self.T[i])
        self._word_cache[word] = M
        return M

    def matrix_of(self, el: dict) -> np.ndarray:
        """Left-multiplication matrix of an element given as a dict or a
        coefficient vector on the normal-form basis."""
        if isinstance(el, np.ndarray):
            el = {self.nf.basis[j]: int(el[j]) for j in np.nonzero(el)[0]}
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for (a, w), c in el.items():
            M = self.identity()
            for k in range(1, self.params.n + 1):
                for _ in range(a[k - 1]):
                    M = self.mm(M, self.L[k])
            M = self.mm(M, self.t_word_matrix(comb.official_word(w)))
            out = (out + c * M) % self.p
        return out

    def vector_of(self, M: np.ndarray) -> np.ndarray:
        """Coefficient vector of the element represented by matrix M."""
        return M[:, self.id_index] % self.p

    def star_of_matrix(self, M: np.ndarray) -> np.ndarray:
        """Left-multiplication matrix of the star of the element with
        left-multiplication matrix M."""
        return self.matrix_of(self.star_mat @ self.vector_of(M) % self.p)

    def relation_failures(self, rng=None, samples: int = 5) -> list[str]:
        """Exact matrix checks of every defining relation."""
        p, q, n = self.p, self.params.q, self.params.n
        I = self.identity()
        fails = []

        def check(name, A, B):
            if not np.array_equal(A % p, B % p):
                fails.append(name)

        for i in self.T:
            Ti = self.T[i]
            check(f"quadratic T_{i}", self.mm(Ti + I, (Ti - q * I) % p),
                  np.zeros_like(I))
        for i in self.T:
            for j in self.T:
                if abs(i - j) > 1:
                    check(f"commuting T_{i} T_{j}",
                          self.mm(self.T[i], self.T[j]),
                          self.mm(self.T[j], self.T[i]))
        for i in range(1, n - 1):
            check(f"braid T_{i} T_{i+1} T_{i}",
                  self.mm(self.T[i], self.T[i + 1], self.T[i]),
                  self.mm(self.T[i + 1], self.T[i], self.T[i + 1]))
        for r in self.L:
            for s in self.L:
                check(f"commuting L_{r} L_{s}",
                      self.mm(self.L[r], self.L[s]),
                      self.mm(self.L[s], self.L[r]))
        for r in self.T:
            check(f"T_{r} L_{r} = L_{r+1}(T_{r} - q + 1)",
                  self.mm(self.T[r], self.L[r]),
                  self.mm(self.L[r + 1], (self.T[r] - q * I + I) % p))
            check(f"L_{r+1} = q^-1 T_{r} L_{r} T_{r}",
                  self.L[r + 1],
                  pow(q, -1, p) * self.mm(self.T[r], self.L[r], self.T[r]) % p)
            for s in self.L:
                if abs(r - s) > 1 and s != r + 1:
                    check(f"commuting T_{r} L_{s}",
                          self.mm(self.T[r], self.L[s]),
                          self.mm(self.L[s], self.T[r]))
        cyc = self.identity()
        for Qj in self.nf.Q:
            cyc = self.mm(cyc, (self.L[1] - Qj * I) % p)
        check("cyclotomic relation for L_1", cyc, np.zeros_like(I))
        check("star is an involution", self.mm(self.star_mat, self.star_mat), I)
        if rng is None:
            rng = np.random.default_rng(20260826)
        for _ in range(samples):
            x = rng.integers(0, p, self.dim)
            y = rng.integers(0, p, self.dim)
            Mx, My = self.matrix_of(x), self.matrix_of(y)
            lhs = self.star_mat @ self.vector_of(self.mm(Mx, My)) % p
            rhs = self.vector_of(
                self.mm(self.matrix_of(self.star_mat @ y % p),
                        self.matrix_of(self.star_mat @ x % p)))
            if not np.array_equal(lhs, rhs):
                fails.append("star anti-multiplicativity on a random pair")
        return fails


# ---------------------------------------------------------------------------
# Seminormal block model over F_p(t)
# ---------------------------------------------------------------------------


class DegenerateContents(Exception):
    pass


@dataclass
class Block:
    shape: tuple
    std: list
    index: dict
    contents: list  # contents[s][k-1] = integer exponent of t
    tmats: dict     # i -> d x d list of lists of RatFunc


class SeminormalModel:
    """One block per multipartition; rows/columns indexed by standard
    tableaux; matrices record right multiplication, so that the map
    into the direct sum of matrix blocks is an algebra homomorphism."""

    def __init__(self, params: HeckeParams):
        params.validate()
        self.params = params
        p, n, l = params.p, params.n, params.l
        self.sc = RatScalars(p)
        mc = params.mc
        theta = comb.theta_sep(l, n)
        self.blocks: dict = {}
        seen_contents = set()
        for lam in comb.all_multipartitions(n, l):
            std = comb.std_tableaux(lam)
            idx = {t: s for s, t in enumerate(std)}
            contents = []
            for t in std:
                nm = comb.node_map(t)
                vec = tuple(comb.hat_content(nm[k], mc) for k in range(1, n + 1))
                if vec in seen_contents:
                    raise DegenerateContents(
                        f"content vector collision at shape {lam}")
                seen_contents.add(vec)
                contents.append(vec)
            tmats = {}
            for i in range(1, n):
                d = len(std)
                M = [[self.sc.zero] * d for _ in range(d)]
                for s, S in enumerate(std):
                    T = comb.apply_simple(S, i)
                    cs = tpow(p, contents[s][i - 1])
                    ct = tpow(p, comb.hat_content(comb.node_map(S)[i + 1], mc))
                    qq = tpow(p, 1)  # the generic parameter itself
                    if comb.is_standard(T):
                        tt = idx[T]
                        # the common diagonal coefficient
                        diag = (qq - self.sc.one) * ct / (ct - cs)
                        M[s][s] = M[s][s] + diag
                        if comb.tableau_strictly_dominates(S, T, theta):
                            M[s][tt] = M[s][tt] + self.sc.one
                        else:
                            off = ((qq * cs - ct) * (cs - qq * ct)
                                   / ((ct - cs) * (ct - cs)))
                            M[s][tt] = M[s][tt] + off
                    else:
                        ni = comb.node_map(S)[i]
                        nj = comb.node_map(S)[i + 1]
                        if ni[0] == nj[0] and ni[2] == nj[2]:  # same row
                            M[s][s] = M[s][s] + qq
                        else:  # same column
                            M[s][s] = M[s][s] - self.sc.one
                tmats[i] = M
            self.blocks[lam] = Block(lam, std, idx, contents, tmats)

    # -- structural checks ---------------------------------------------------

    def total_dimension(self) -> int:
        return sum(len(b.std) ** 2 for b in self.blocks.values())

    def _mat_mul(self, A, B):
        p = self.params.p
        d = len(A)
        zero = self.sc.zero
        out = [[zero] * d for _ in range(d)]
        for i in range(d):
            for k in range(d):
                a = A[i][k]
                if a.is_zero():
                    continue
                rowB = B[k]
                rowO = out[i]
                for j in range(d):
                    if not rowB[j].is_zero():
                        rowO[j] = rowO[j] + a * rowB[j]
        return out

    def _mat_eq(self, A, B) -> bool:
        return all((A[i][j] - B[i][j]).is_zero()
                   for i in range(len(A)) for j in range(len(A)))

    def _ldiag(self, block: Block, k: int):
        p = self.params.p
        return [tpow(p, block.contents[s][k - 1]) for s in range(len(block.std))]

    def relation_failures(self) -> list[str]:
        p, q, n = self.params.p, self.params.q, self.params.n
        fails = []
        for lam, b in self.blocks.items():
            d = len(b.std)
            zero = [[self.sc.zero] * d for _ in range(d)]
            ident = [[self.sc.one if i == j else self.sc.zero
                      for j in range(d)] for i in range(d)]
            qr = tpow(p, 1)

            def smul(c, A):
                return [[c * x for x in row] for row in A]

            def madd(A, B):
                return [[A[i][j] + B[i][j] for j in range(d)] for i in range(d)]

            for i in range(1, n):
                Ti = b.tmats[i]
                lhs = self._mat_mul(madd(Ti, ident),
                                    madd(Ti, smul(-qr, ident)))
                if not self._mat_eq(lhs, zero):
                    fails.append(f"quadratic T_{i} in block {lam}")
            for i in range(1, n - 1):
                lhs = self._mat_mul(self._mat_mul(b.tmats[i], b.tmats[i + 1]),
                                    b.tmats[i])
                rhs = self._mat_mul(self._mat_mul(b.tmats[i + 1], b.tmats[i]),
                                    b.tmats[i + 1])
                if not self._mat_eq(lhs, rhs):
                    fails.append(f"braid T_{i} in block {lam}")
            for i in range(1, n):
                for j in range(i + 2, n):
                    lhs = self._mat_mul(b.tmats[i], b.tmats[j])
                    rhs = self._mat_mul(b.tmats[j], b.tmats[i])
                    if not self._mat_eq(lhs, rhs):
                        fails.append(f"commuting T_{i} T_{j} in block {lam}")
            # T_r L_r = L_{r+1} (T_r - q + 1) on diagonal L action
            for r in range(1, n):
                Lr = self._ldiag(b, r)
                Lr1 = self._ldiag(b, r + 1)
                Tr = b.tmats[r]
                lhs = [[Tr[i][j] * Lr[j] for j in range(d)] for i in range(d)]
                rhs = [[Lr1[i] * (Tr[i][j] + (self.sc.one - qr)
                                  * (self.sc.one if i == j else self.sc.zero))
                        for j in range(d)] for i in range(d)]
                if not self._mat_eq(lhs, rhs):
                    fails.append(f"mixed relation T_{r} L_{r} in block {lam}")
            # cyclotomic relation on L_1
            for s in range(d):
                val = self.sc.one
                for kj in self.params.hat_kappa:
                    val = val * (tpow(p, b.contents[s][0]) - tpow(p, kj))
                if not val.is_zero():
                    fails.append(f"cyclotomic L_1 in block {lam}")
                    break
        return fails

    # -- Murphy idempotents in the block model -------------------------------

    @lru_cache(maxsize=None)
    def _content_sets(self):
        n = self.params.n
        sets = [set() for _ in range(n)]
        for b in self.blocks.values():
            for vec in b.contents:
                for k in range(n):
                    sets[k].add(vec[k])
        return [sorted(s) for s in sets]

    def murphy_eigenvalue(self, S, U) -> RatFunc:
        """Eigenvalue of the product-formula idempotent of S on the
        seminormal basis vector of U."""
        p = self.params.p
        bS = self.blocks[comb.shape_of(S)]
        bU = self.blocks[comb.shape_of(U)]
        cS = bS.contents[bS.index[S]]
        cU = bU.contents[bU.index[U]]
        sets = self._content_sets()
        val = self.sc.one
        for k in range(self.params.n):
            for c in sets[k]:
                if c == cS[k]:
                    continue
                if cU[k] == c:
                    return self.sc.zero
                val = val * ((tpow(p, cU[k]) - tpow(p, c))
                             / (tpow(p, cS[k]) - tpow(p, c)))
        return val

    def murphy_is_matrix_unit(self, S) -> bool:
        """The product formula applied in the block model must give the
        diagonal matrix unit at (S, S)."""
        one = self.sc.one
        for b in self.blocks.values():
            for U in b.std:
                val = self.murphy_eigenvalue(S, U)
                want = one if U == S else self.sc.zero
                if not (val - want).is_zero():
                    return False
        return True


# ---------------------------------------------------------------------------
# Murphy / class idempotents in normal-form coordinates (generic mode)
# ---------------------------------------------------------------------------


def standard_tableaux_all(n: int, l: int) -> list:
    out = []
    for lam in comb.all_multipartitions(n, l):
        out.extend(comb.std_tableaux(lam))
    return out


def content_sets(params: HeckeParams) -> list[list[int]]:
    """C(k): every integral content an entry k can have in a standard
    tableau of any multipartition of n."""
    mc = params.mc
    sets: list[set] = [set() for _ in range(params.n)]
    for t in standard_tableaux_all(params.n, params.l):
        nm = comb.node_map(t)
        for k in range(1, params.n + 1):
            sets[k - 1].add(comb.hat_content(nm[k], mc))
    return [sorted(s) for s in sets]


def generic_normal_form(params: HeckeParams) -> NormalForm:
    """Normal-form model over F_p[t] with q-hat = t; denominator-free."""
    sc = PolyScalars(params.p)
    t = Poly.gen(params.p)
    Q = [Poly.monomial(params.p, 1, kj) for kj in params.hat_kappa]
    return NormalForm(params.n, params.l, sc, t, Q)


def _div_by_binomial(num: np.ndarray, d: int, p: int):
    """Exact quotient of the coefficient array by t^d - 1, or None if
    the division leaves a remainder.  Writing the array in blocks of d
    coefficients, divisibility means the blocks sum to zero, and the
    quotient blocks are the negated partial sums."""
    pad = (-len(num)) % d
    if pad:
        num = np.concatenate([num, np.zeros(pad, dtype=np.int64)])
    blocks = num.reshape(-1, d)
    partial = np.cumsum(blocks, axis=0) % p
    if partial[-1].any():
        return None
    quo = (-partial[:-1]).reshape(-1) % p
    nz = np.flatnonzero(quo)
    return quo[:nz[-1] + 1] if len(nz) else quo[:1]


def _mul_by_binomial(vec: np.ndarray, d: int, p: int) -> np.ndarray:
    """Multiply every row of a coefficient matrix by t^d - 1."""
    rows, width = vec.shape
    out = np.zeros((rows, width + d), dtype=np.int64)
    out[:, d:] = vec
    out[:, :width] -= vec
    return out % p


class MurphyEngine:
    """Evaluates the product-formula idempotents in normal-form
    coordinates over F_p(t), denominator-free until the very end.

    Working representation: a vector is a dense int64 matrix with one
    row per basis key and one column per power of t, together with one
    global power-of-t offset.  The n operators t^{k-1} L_k are
    preexpanded once into stacks of sparse matrices indexed by
    coefficient degree, so applying a factor is a handful of sparse
    matrix products; tableaux sharing an initial segment of contents
    share the corresponding partial products through a prefix tree."""

    def __init__(self, params: HeckeParams):
        params.validate()
        self.params = params
        self.p = params.p
        self.nf = generic_normal_form(params)
        self.csets = content_sets(params)
        self.tabs = standard_tableaux_all(params.n, params.l)
        mc = params.mc
        self.content_of = {}
        for T in self.tabs:
            nm = comb.node_map(T)
            self.content_of[T] = tuple(comb.hat_content(nm[k], mc)
                                       for k in range(1, params.n + 1))
        if len(set(self.content_of.values())) != len(self.tabs):
            raise DegenerateContents("content vectors do not separate "
                                     "standard tableaux")
        self.key_index = {key: i for i, key in enumerate(self.nf.basis)}
        self.ops = {k: self._op_layers(k) for k in range(1, params.n + 1)}
        self._powcache: dict[int, np.ndarray] = {}
        self._rootcache: dict[int, np.ndarray] = {}
        self._dencache: dict = {}

    def _op_layers(self, k: int):
        """t^{k-1} L_k as a list of (degree, sparse matrix) layers:
        the entry of layer a at (i, j) is the coefficient of t^a in
        the basis-j column of the operator, row i."""
        dim = len(self.nf.basis)
        triples: dict[int, list] = {}
        for key in self.nf.basis:
            j = self.key_index[key]
            el = self.nf.lmul_l_unnorm(k, self.nf.unit_at(key))
            for okey, c in el.items():
                i = self.key_index[okey]
                for a, cv in enumerate(c.coeffs):
                    if cv:
                        triples.setdefault(a, []).append((i, j, cv))
        layers = []
        for a in sorted(triples):
            rows, cols, vals = zip(*triples[a])
            layers.append((a, sparse.csr_matrix(
                (vals, (rows, cols)), shape=(dim, dim), dtype=np.int64)))
        return layers

    def _pows(self, x: int, length: int) -> np.ndarray:
        """Array of x^j mod p for j < length, cached and grown on demand."""
        arr = self._powcache.get(x)
        if arr is None or len(arr) < length:
            p = self.p
            out = [0] * max(length, 256)
            y = 1
            for j in range(len(out)):
                out[j] = y
                y = y * x % p
            arr = np.array(out, dtype=np.int64)
            self._powcache[x] = arr
        return arr

    def _apply_factor(self, vec: np.ndarray, k: int,
                      c: int) -> tuple[np.ndarray, int]:
        """vec -> t^m (L_k - t^c) vec with m = max(k-1, -c) >= 0;
        returns the new matrix and the offset increment m."""
        p = self.p
        m = max(k - 1, -c)
        s_op = m - (k - 1)
        s_id = m + c
        dim, width = vec.shape
        layers = self.ops[k]
        top = max(s_op + layers[-1][0], s_id) + width
        out = np.zeros((dim, top), dtype=np.int64)
        for a, A in layers:
            out[:, s_op + a:s_op + a + width] += A @ vec
        out[:, s_id:s_id + width] -= vec
        out %= p
        nz = np.flatnonzero(out.any(axis=0))
        return out[:, :nz[-1] + 1] if len(nz) else out[:, :1], m

    def _leaf_ratfuncs(self, vec: dict, offset: int, cS) -> dict:
        """Divide the polynomial vector by the full denominator.

        The denominator is known in factored form, sign * t^M times a
        product of binomials t^d - 1, so instead of a generic gcd each
        coordinate is reduced by exact division against those factors
        and then by the linear factors t - x at every root x of the
        remaining denominator in F_p.  The result may retain a common
        irreducible factor of degree > 1, but it is exact, and
        specialization and pole detection at any point of F_p are
        unaffected (every shared linear factor has been cancelled)."""
        tpows, fac, sign = self._leaf_factors(cS)
        return self._reduce_matrix(vec, offset + tpows, fac, sign)

    def _leaf_factors(self, cS) -> tuple[int, dict, int]:
        """Denominator of the product formula at content vector cS in
        factored form: (power of t, {binomial degree d: multiplicity},
        overall sign), the denominator being sign * t^pow * prod of
        (t^d - 1)^mult."""
        tpows = 0
        sign = 1
        fac: dict[int, int] = {}
        for k in range(1, self.params.n + 1):
            for c in self.csets[k - 1]:
                if c == cS[k - 1]:
                    continue
                tpows += min(cS[k - 1], c)
                d = abs(cS[k - 1] - c)
                fac[d] = fac.get(d, 0) + 1
                if cS[k - 1] < c:
                    sign = -sign
        return tpows, fac, sign

    def _reduce_matrix(self, vec: np.ndarray, tpows: int, fac: dict,
                       sign: int) -> dict:
        out = {}
        for i in np.flatnonzero(vec.any(axis=1)):
            rf = self._reduce(vec[i], tpows, fac, sign)
            if not rf.is_zero():
                out[self.nf.basis[i]] = rf
        return out

    def _root_mult(self, d: int) -> np.ndarray:
        """Multiplicity of each x in F_p* as a root of t^d - 1."""
        arr = self._rootcache.get(d)
        if arr is None:
            p = self.p
            d0, pa = d, 1
            while d0 % p == 0:
                d0 //= p
                pa *= p
            arr = np.array([0] + [pa if pow(x, d0, p) == 1 else 0
                                  for x in range(1, p)], dtype=np.int64)
            self._rootcache[d] = arr
        return arr

    def _den_poly(self, tpows: int, fac_items: tuple,
                  cancels: tuple) -> Poly:
        """t^tpows * prod (t^d - 1)^m / prod (t - x)^c, cached."""
        key = (tpows, fac_items, cancels)
        den = self._dencache.get(key)
        if den is None:
            p = self.p
            den = Poly.monomial(p, 1, tpows)
            for d, m in fac_items:
                f = Poly.monomial(p, 1, d) - Poly.const(p, 1)
                for _ in range(m):
                    den = den * f
            for x, cnt in cancels:
                lin = Poly.of(p, [-x, 1])
                for _ in range(cnt):
                    den = den // lin
            self._dencache[key] = den
        return den

    def _div_linear(self, num: np.ndarray, x: int):
        """Exact quotient of the coefficient array by t - x, or None
        if x is not a root; computed by a vectorized synthetic
        division (reversed cumulative sums of n_j x^j)."""
        p = self.p
        width = len(num)
        w = num * self._pows(x, width)[:width] % p
        partial = np.flip(np.cumsum(np.flip(w))) % p
        if partial[0]:
            return None
        inv = pow(x, -1, p)
        quo = partial[1:] * self._pows(inv, width)[1:width] % p
        nz = np.flatnonzero(quo)
        return quo[:nz[-1] + 1] if len(nz) else quo[:1]

    def _reduce(self, num: np.ndarray, tpows: int, fac: dict,
                sign: int) -> RatFunc:
        p = self.p
        num = np.asarray(num, dtype=np.int64) % p
        if not num.any():
            return RatFunc.of_poly(Poly.const(p, 0))
        nz = np.flatnonzero(num)
        num = num[:nz[-1] + 1]
        s = min(int(nz[0]), tpows)
        if s:
            num = num[s:]
            tpows -= s
        res = dict(fac)
        mult = np.zeros(p, dtype=np.int64)
        for d in sorted(res):
            # 1 is a root of every t^d - 1, so a nonzero value there
            # rules out all further whole-binomial divisions.
            while res[d] and num.sum() % p == 0:
                quo = _div_by_binomial(num, d, p)
                if quo is None:
                    break
                num = quo
                res[d] -= 1
            if res[d]:
                mult += res[d] * self._root_mult(d)
        cancels = []
        for x in np.flatnonzero(mult):
            cnt = 0
            while cnt < mult[x]:
                quo = self._div_linear(num, int(x))
                if quo is None:
                    break
                num = quo
                cnt += 1
            if cnt:
                cancels.append((int(x), cnt))
        den = self._den_poly(
            tpows, tuple((d, m) for d, m in sorted(res.items()) if m),
            tuple(cancels))
        numP = Poly.of(p, (num if sign == 1 else (-num) % p).tolist())
        inv = pow(den.leading(), -1, p)
        return RatFunc(numP.scale(inv), den.monic())

    def _walk(self, tabs, k, vec, offset, out, keep_raw=False):
        if k > self.params.n:
            T = tabs[0]
            if keep_raw:
                out[T] = (vec, offset)
            else:
                out[T] = self._leaf_ratfuncs(vec, offset,
                                             self.content_of[T])
            return
        groups: dict = {}
        for T in tabs:
            groups.setdefault(self.content_of[T][k - 1], []).append(T)
        for ck, sub in sorted(groups.items()):
            v, off = vec, offset
            for c in self.csets[k - 1]:
                if c == ck:
                    continue
                v, m = self._apply_factor(v, k, c)
                off += m
            self._walk(sub, k + 1, v, off, out, keep_raw)

    def murphy_vectors(self, tabs=None) -> dict:
        """Tableau -> {basis key -> RatFunc} for the given tableaux
        (default: all standard tableaux of size n)."""
        if tabs is None:
            tabs = self.tabs
        out: dict = {}
        unit = np.zeros((len(self.nf.basis), 1), dtype=np.int64)
        unit[self.key_index[self.nf.identity_key], 0] = 1
        self._walk(list(tabs), 1, unit, 0, out)
        return out

    def class_vectors(self) -> dict:
        """Residue sequence -> normal-form coordinates of E_[i].

        The tableau idempotents of a residue class are summed before
        any reduction, in the factored common-denominator form: each
        raw leaf numerator is scaled up to the classwise least common
        denominator by shift-and-subtract binomial multiplications,
        the matrices are added, and the sum is reduced once."""
        p = self.p
        mc = self.params.mc
        raw: dict = {}
        unit = np.zeros((len(self.nf.basis), 1), dtype=np.int64)
        unit[self.key_index[self.nf.identity_key], 0] = 1
        self._walk(list(self.tabs), 1, unit, 0, raw, keep_raw=True)
        classes: dict = {}
        for T in self.tabs:
            classes.setdefault(comb.residue_seq(T, mc), []).append(T)
        out: dict = {}
        for key, tabs in classes.items():
            dens = {}
            for T in tabs:
                tpows, fac, sign = self._leaf_factors(self.content_of[T])
                dens[T] = (tpows + raw[T][1], fac, sign)
            top = max(tp for tp, _, _ in dens.values())
            lcm: dict[int, int] = {}
            for _, fac, _ in dens.values():
                for d, m in fac.items():
                    lcm[d] = max(lcm.get(d, 0), m)
            widths = sum(raw[T][0].shape[1] for T in tabs)
            extra = sum(
                (top - dens[T][0])
                + sum(d * (m - dens[T][1].get(d, 0))
                      for d, m in lcm.items())
                for T in tabs)
            if extra > widths:
                # The common denominator would inflate the numerators
                # more than it saves: reduce each leaf separately and
                # add the fractions instead.
                acc_rf: dict = {}
                for T in tabs:
                    tp, fac, sign = dens[T]
                    for bk, rf in self._reduce_matrix(
                            raw[T][0], tp, fac, sign).items():
                        cur = acc_rf.get(bk)
                        acc_rf[bk] = rf if cur is None else cur + rf
                out[key] = {bk: v for bk, v in acc_rf.items()
                            if not v.is_zero()}
                continue
            acc = None
            for T in tabs:
                vec = raw[T][0]
                tp, fac, sign = dens[T]
                W = vec if sign == 1 else (-vec) % p
                if tp < top:
                    W = np.concatenate(
                        [np.zeros((vec.shape[0], top - tp),
                                  dtype=np.int64), W], axis=1)
                for d, m in lcm.items():
                    for _ in range(m - fac.get(d, 0)):
                        W = _mul_by_binomial(W, d, p)
                if acc is None:
                    acc = W.copy() if W is vec else W
                elif acc.shape[1] >= W.shape[1]:
                    acc[:, :W.shape[1]] += W
                    acc %= p
                else:
                    W = W.copy() if W is vec else W
                    W[:, :acc.shape[1]] += acc
                    acc = W % p
            out[key] = self._reduce_matrix(acc, top, lcm, 1)
        return out


@lru_cache(maxsize=8)
def murphy_engine(params: HeckeParams) -> MurphyEngine:
    return MurphyEngine(params)


def murphy_vector(params: HeckeParams, nf: NormalForm, S,
                  csets=None) -> dict:
    """Coefficients of the tableau idempotent F_S on the normal-form
    basis, as rational functions of t."""
    return murphy_engine(params).murphy_vectors([S])[S]


def class_partition(params: HeckeParams) -> dict:
    """Standard tableaux of size n grouped by residue sequence mod e."""
    mc = params.mc
    classes: dict = {}
    for t in standard_tableaux_all(params.n, params.l):
        classes.setdefault(comb.residue_seq(t, mc), []).append(t)
    return classes


def class_idempotent_vector(params: HeckeParams, nf: NormalForm, tabs,
                            csets=None) -> dict:
    """E_[i] = sum of F_T over the class, in normal-form coordinates."""
    vecs = murphy_engine(params).murphy_vectors(list(tabs))
    out: dict = {}
    for T in tabs:
        for key, val in vecs[T].items():
            cur = out.get(key)
            out[key] = val if cur is None else cur + val
    return {key: val for key, val in out.items() if not val.is_zero()}


def specialize_vector(vec: dict, params: HeckeParams) -> dict:
    """Evaluate a generic coefficient vector at t = q; raises
    PoleAtSpecialization on any pole."""
    out = {}
    for key, val in vec.items():
        c = val.specialize(params.q)
        if c % params.p:
            out[key] = c % params.p
    return out


# ---------------------------------------------------------------------------
# Rank-one idempotents of the two-string subalgebra
# ---------------------------------------------------------------------------


def _two_string_params(params: HeckeParams) -> HeckeParams:
    return HeckeParams(n=2, l=params.l, e=params.e, p=params.p,
                       q=params.q, hat_kappa=params.hat_kappa)


def e2_idempotents(params: HeckeParams) -> list[dict]:
    """For each level component j, the idempotent of the two-string
    subalgebra projecting onto its one-dimensional module with
    L_1, L_2, T_1 eigenvalues q^{kappa_j}, q^{kappa_j + 1}, q.

    Computed two independent ways -- specializing the generic class
    idempotent, and solving the eigenvalue system in the regular
    representation of the two-string algebra -- and cross-checked.
    Returned as dicts on the two-string normal-form basis; the keys
    embed verbatim into any larger normal-form basis by appending
    zero exponents and fixed points."""
    if params.n < 2:
        raise ValueError("needs n >= 2")
    p2 = _two_string_params(params)
    p2.validate()
    p, q, e = p2.p, p2.q, p2.e
    nf = generic_normal_form(p2)
    csets = content_sets(p2)
    classes = class_partition(p2)
    reg = RegularRep(p2)
    out = []
    for j in range(params.l):
        kj = p2.mc.kappa[j]
        # route (a): the class of the row tableau of component j is a
        # singleton; specialize its class idempotent
        key = (kj % e, (kj + 1) % e)
        tabs = classes[key]
        if len(tabs) != 1:
            raise ValueError(f"class {key} is not a singleton; bad multicharge")
        va = specialize_vector(
            class_idempotent_vector(p2, nf, tabs, csets), p2)
        # route (b): eigenvalue system in the regular representation
        I = reg.identity()
        stack = np.vstack([
            (reg.L[1] - pow(q, kj, p) * I) % p,
            (reg.L[2] - pow(q, kj + 1, p) * I) % p,
            (reg.T[1] - q * I) % p,
        ])
        ns = nullspace(stack, p)
        if ns.shape[0] != 1:
            raise ValueError(f"eigenvalue system solution space has "
                             f"dimension {ns.shape[0]}, expected 1")
        v = ns[0] % p
        Mv = reg.matrix_of(v)
        v2 = Mv @ v % p
        # v^2 = beta v on a one-dimensional block; normalize
        pos = int(np.nonzero(v)[0][0])
        beta = v2[pos] * pow(int(v[pos]), -1, p) % p
        if not np.array_equal(v2 % p, beta * v % p):
            raise ValueError("eigenvalue system vector does not square "
                             "into its own line")
        vb = pow(int(beta), -1, p) * v % p
        vb_dict = {reg.nf.basis[i]: int(vb[i]) for i in np.nonzero(vb)[0]}
        if vb_dict != va:
            raise ValueError(f"the two constructions of the rank-one "
                             f"idempotent disagree at component {j}")
        out.append(va)
    return out


def embed_two_string(params: HeckeParams, el2: dict) -> dict:
    """Embed an element of the two-string subalgebra into the size-n
    normal-form basis."""
    n = params.n
    out = {}
    for (a, w), c in el2.items():
        a_n = tuple(a) + (0,) * (n - 2)
        w_n = tuple(w) + tuple(range(3, n + 1))
        out[(a_n, w_n)] = c
    return out

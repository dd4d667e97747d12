"""Tests for the generalized blob algebra: quotient construction,
quiver-Hecke generator images and the defining relation suite, the graded
cellular basis, Jucys-Murphy triangularity, and cell modules."""

import numpy as np
import pytest

from blobcell import blob as B
from blobcell import combinatorics as C
from blobcell import hecke as H

SCALES = [(2, 2), (3, 2), (2, 3)]


@pytest.fixture(scope="module")
def built():
    """Quotient algebra, generator images, and cellular basis per scale."""
    out = {}
    for n, l in SCALES:
        params = H.default_params(n, l)
        A = B.build_blob(params)
        images = B.klr_images(A)
        basis = B.build_cellular_basis(A, images)
        out[(n, l)] = (params, A, images, basis)
    return out


@pytest.fixture(scope="module")
def built_full():
    """The same generator images inside the unquotiented algebra."""
    out = {}
    for n, l in SCALES:
        params = H.default_params(n, l)
        A = B.BlobAlgebra(params, quotient=False)
        out[(n, l)] = (params, A, B.KLRImages(A))
    return out


class TestQuotient:
    @pytest.mark.parametrize("n,l,dim", [(2, 2, 6), (3, 2, 20), (2, 3, 15)])
    def test_dimension(self, built, n, l, dim):
        _, A, _, _ = built[(n, l)]
        assert A.dim == dim
        assert A.dim == B.one_column_dimension(n, l)
        assert A.ideal_rank == A.reg.dim - dim

    def test_dimension_law_oracle(self, built):
        # independent oracle: sum of squared standard-tableau counts over
        # one-column shapes, via the hook-free recursive enumeration
        for n, l in SCALES:
            _, A, _, _ = built[(n, l)]
            expected = sum(len(C.std_tableaux(lam)) ** 2
                           for lam in C.one_column_shapes(n, l))
            assert A.dim == expected

    def test_quotient_map_shape(self, built):
        _, A, _, _ = built[(2, 2)]
        assert A.quotient_map.shape == (A.dim, A.reg.dim)
        # the map kills the ideal and is a left inverse of the lift
        assert not (A.quotient_map @ A.ideal_rows.T % A.p).any()
        assert np.array_equal(
            A.quotient_map @ A._lift_mat % A.p, A.identity)

    def test_quotient_is_algebra_map(self, built):
        params, A, _, _ = built[(3, 2)]
        rng = np.random.default_rng(5)
        for _ in range(3):
            x = rng.integers(0, A.p, A.reg.dim)
            y = rng.integers(0, A.p, A.reg.dim)
            xy = B.left_mult_matrix(A.reg, x) @ y % A.p
            lhs = A.quotient_map @ xy % A.p
            rhs = A.lmat(A.quotient_map @ x % A.p) @ \
                (A.quotient_map @ y % A.p) % A.p
            assert np.array_equal(lhs, rhs)

    def test_left_mult_matrix_matches_dict_route(self):
        params = H.default_params(2, 2)
        reg = H.RegularRep(params)
        rng = np.random.default_rng(7)
        v = rng.integers(0, params.p, reg.dim)
        assert np.array_equal(B.left_mult_matrix(reg, v),
                              reg.matrix_of(v))


class TestRelationSuite:
    @pytest.mark.parametrize("n,l", SCALES)
    def test_full_suite_in_quotient(self, built, n, l):
        _, _, images, _ = built[(n, l)]
        assert images.relation_failures() == []

    @pytest.mark.parametrize("n,l", SCALES)
    def test_suite_before_quotient(self, built_full, n, l):
        # everything except the quotient-defining vanishing pattern
        # already holds inside the unquotiented algebra
        _, _, images = built_full[(n, l)]
        assert images.relation_failures(blob_defining=False) == []

    def test_vanishing_pattern_fails_before_quotient(self, built_full):
        # the distinguishing relation: before the quotient there are
        # nonzero idempotents whose second residue is one above the first
        _, _, images = built_full[(3, 2)]
        fails = images.relation_failures(blob_defining=True)
        assert fails
        assert all("second residue" in f.relation for f in fails)

    @pytest.mark.parametrize("n,l", SCALES)
    def test_eigenspace_projections(self, built, built_full, n, l):
        _, _, images, _ = built[(n, l)]
        assert images.eigenprojection_failures() == []
        assert built_full[(n, l)][2].eigenprojection_failures() == []

    @pytest.mark.parametrize("n,l", SCALES)
    def test_degree_table_homogeneous(self, built, n, l):
        _, _, images, _ = built[(n, l)]
        assert images.degree_violations() == []

    def test_realized_classes_are_one_column(self, built):
        params, _, images, _ = built[(3, 2)]
        expected = set()
        for lam in C.one_column_shapes(3, 2):
            for T in C.std_tableaux(lam):
                expected.add(C.residue_seq(T, params.mc))
        assert set(images.E) == expected

    def test_first_residue_support(self, built):
        # supports of e(i): first residue in the multicharge, second never
        # one above the first
        params, _, images, _ = built[(3, 2)]
        kap = {k % params.e for k in params.mc.kappa}
        for iseq in images.E:
            assert iseq[0] % params.e in kap
            assert iseq[1] % params.e != (iseq[0] + 1) % params.e

    def test_relation_failure_reported(self, built):
        _, A, _, _ = built[(2, 2)]
        broken = B.KLRImages(A)
        iseq = next(iter(broken.E))
        broken.E[iseq] = (broken.E[iseq] + 1) % A.p
        fails = broken.relation_failures()
        assert fails and isinstance(fails[0], B.RelationFailure)
        assert fails[0].witness is not None
        with pytest.raises(B.RelationFailure):
            raise fails[0]


class TestJucysMurphy:
    @pytest.mark.parametrize("n,l", SCALES)
    def test_images_agree_and_commute(self, built, n, l):
        _, A, images, _ = built[(n, l)]
        jm = B.jm_images(A, images)
        for k in jm:
            assert np.array_equal(jm[k], A.L[k])

    def test_nilpotent_part(self, built):
        _, A, images, _ = built[(3, 2)]
        jm = B.jm_images(A, images)
        for iseq, Ei in images.E.items():
            for k in jm:
                N = (jm[k] - pow(A.q, iseq[k - 1], A.p)
                     * A.identity) @ Ei % A.p
                assert not B._mat_pow(N, A.dim + 1, A.p).any()

    def test_redundant_generator(self, built):
        # the second Jucys-Murphy element is recovered from the first:
        # q^{-1} T_1 L_1 T_1
        _, A, images, _ = built[(2, 2)]
        jm = B.jm_images(A, images)
        rebuilt = pow(A.q, -1, A.p) * (A.T[1] @ A.L[1] @ A.T[1]) % A.p
        assert np.array_equal(jm[2], rebuilt)

    @pytest.mark.parametrize("n,l", SCALES)
    def test_triangular_action(self, built, n, l):
        _, A, images, basis = built[(n, l)]
        jm = B.jm_images(A, images)
        assert B.check_jm(A, basis, jm) == []


class TestCellularBasis:
    @pytest.mark.parametrize("n,l", SCALES)
    def test_built_and_certified(self, built, n, l):
        _, A, _, basis = built[(n, l)]
        assert len(basis.index) == A.dim

    def test_basis_vector_count_small(self, built):
        _, A, _, basis = built[(2, 2)]
        assert basis.matrix.shape == (6, 6)

    def test_maximal_pair_is_idempotent(self, built):
        _, A, images, basis = built[(3, 2)]
        for lam in basis.shapes:
            tl = basis.t_lam[lam]
            assert np.array_equal(
                basis.vector(tl, tl),
                images.E[basis.i_lam[lam]] @ A.unit % A.p)

    @pytest.mark.parametrize("n,l", SCALES)
    def test_star_symmetry(self, built, n, l):
        _, A, images, basis = built[(n, l)]
        sig = images.sigma
        for _, S, T in basis.index:
            assert np.array_equal(sig @ basis.vector(S, T) % A.p,
                                  basis.vector(T, S))

    def test_identity_expansion(self, built):
        # the identity expands with coefficient 1 on every maximal pair and
        # only diagonal pairs otherwise, all with coefficient 1
        for n, l in SCALES:
            _, A, _, basis = built[(n, l)]
            c = basis.expand(A.unit)
            for lam in basis.shapes:
                tl = basis.t_lam[lam]
                assert c[basis.column[(tl, tl)]] == 1
            for idx in np.nonzero(c % A.p)[0]:
                _, S, T = basis.index[idx]
                assert S == T and c[idx] == 1
            assert np.array_equal(basis.matrix @ c % A.p, A.unit)

    def test_expansion_roundtrip(self, built):
        _, A, _, basis = built[(3, 2)]
        rng = np.random.default_rng(11)
        v = rng.integers(0, A.p, A.dim)
        assert np.array_equal(basis.matrix @ basis.expand(v) % A.p,
                              v % A.p)

    def test_rank_deficiency_aborts(self, built):
        # zeroed crossing images collapse the family; the constructor
        # must refuse to certify it
        _, A, images, _ = built[(2, 2)]
        broken = B.KLRImages(A)
        broken.PSI = {r: np.zeros_like(A.identity) for r in broken.PSI}
        with pytest.raises(ValueError, match="rank"):
            B.CellularBasis(A, broken)

    def test_degrees_match_tableau_degrees(self, built):
        params, _, _, basis = built[(3, 2)]
        for lam, S, T in basis.index:
            assert basis.degree(S, T) == \
                C.tableau_degree(S, params.mc) + \
                C.tableau_degree(T, params.mc)

    def test_degree_difference_independent_of_first_index(self, built):
        _, _, _, basis = built[(3, 2)]
        for lam in basis.shapes:
            tl = basis.t_lam[lam]
            for T in basis.std[lam]:
                diffs = {basis.degree(S, T) - basis.degree(S, tl)
                         for S in basis.std[lam]}
                assert len(diffs) == 1


class TestOfficialWords:
    def test_identity_word(self):
        assert B.official_word(C.perm_identity(3)) == ()

    def test_lengths_s4(self):
        for w in __import__("itertools").permutations(range(1, 5)):
            assert len(B.official_word(w)) == C.perm_length(w)

    def test_psi_of_identity(self, built):
        _, A, images, _ = built[(2, 2)]
        assert np.array_equal(images.psi_of(()), A.identity)

    def test_alternate_reduced_word_support(self, built):
        # replacing the official word of d(T) by another reduced word of
        # the same permutation perturbs m_{S,T} only by basis pairs that
        # are strictly higher (in shape, or in either tableau)
        params, A, images, basis = built[(3, 2)]
        w0, alt = (1, 2, 1), (2, 1, 2)
        theta = basis.theta
        # at this scale no realized residue sequence meets the braid
        # correction pattern, so the two products agree on the nose
        for iseq, Ei in images.E.items():
            a, b, c = iseq
            correction = a == c and (b - a) % params.e in (1, params.e - 1)
            assert not correction
            assert np.array_equal(images.psi_of(w0) @ Ei % A.p,
                                  images.psi_of(alt) @ Ei % A.p)
        for lam in basis.shapes:
            for T in basis.std[lam]:
                if basis.word[T] != w0:
                    continue
                for S in basis.std[lam]:
                    mv = images.psi_of(tuple(reversed(basis.word[S]))) @ \
                        images.E[basis.i_lam[lam]] @ images.psi_of(alt) @ \
                        A.unit % A.p
                    d = basis.expand((mv - basis.vector(S, T)) % A.p)
                    for idx in np.nonzero(d % A.p)[0]:
                        mu, U, V = basis.index[idx]
                        assert (mu in basis._above[lam] or
                                C.tableau_strictly_dominates(U, S, theta) or
                                C.tableau_strictly_dominates(V, T, theta))


class TestCellularity:
    @pytest.mark.parametrize("n,l", SCALES)
    def test_full_sweep(self, built, n, l):
        _, A, _, basis = built[(n, l)]
        assert B.check_cellularity(A, basis) == []

    def test_idempotent_acts_as_delta(self, built):
        _, A, images, basis = built[(3, 2)]
        for lam in basis.shapes:
            tl = basis.t_lam[lam]
            Ei = images.E[basis.i_lam[lam]]
            for T in basis.std[lam]:
                assert np.array_equal(Ei @ basis.vector(tl, T) % A.p,
                                      basis.vector(tl, T))

    def test_dot_on_maximal_pair_lands_higher(self, built):
        # a dot on the maximal pair is supported on strictly dominating
        # shapes only
        _, A, images, basis = built[(3, 2)]
        for lam in basis.shapes:
            tl = basis.t_lam[lam]
            for k in images.Y:
                c = basis.expand(images.Y[k] @ basis.vector(tl, tl) % A.p)
                for idx in np.nonzero(c % A.p)[0]:
                    mu, _, _ = basis.index[idx]
                    assert mu in basis._above[lam]


class TestCellModules:
    @pytest.mark.parametrize("n,l", SCALES)
    def test_dimension_identity(self, built, n, l):
        _, A, _, basis = built[(n, l)]
        mods = B.cell_modules(A, basis)
        assert sum(m.dim ** 2 for m in mods) == A.dim
        for m in mods:
            assert len(C.std_tableaux(m.shape)) == m.dim
            assert np.array_equal(m.gram, m.gram.T)
            assert 0 <= m.radical_dim <= m.dim

    def test_singleton_modules(self, built):
        _, A, _, basis = built[(2, 2)]
        mods = B.cell_modules(A, basis)
        for m in mods:
            if m.dim == 1:
                assert m.gram[0, 0] % A.p != 0

    def test_action_matrices_represent(self, built):
        # the action matrices from the cellularity coefficients compose
        # like the generators do on the cell module basis
        _, A, images, basis = built[(3, 2)]
        mods = B.cell_modules(A, basis)
        p = A.p
        for m in mods:
            lam = m.shape
            tl = basis.t_lam[lam]
            above = basis._above[lam]
            for name, G in B._named_generators(images):
                for j, S in enumerate(m.tableaux):
                    v = G @ basis.vector(S, tl) % p
                    c = basis.expand(v)
                    for i, U in enumerate(m.tableaux):
                        assert c[basis.column[(U, tl)]] % p == \
                            m.action[name][i, j] % p


class TestMaxShapeVanishing:
    @pytest.mark.parametrize("n,l", SCALES)
    def test_dots_kill_maximal_idempotent(self, built, n, l):
        params, A, images, _ = built[(n, l)]
        imax = C.i_lambda(C.mu_max(n, l), params.mc)
        E = images.E[imax]
        for k in images.Y:
            assert not (images.Y[k] @ E % A.p).any()
            assert not (E @ images.Y[k] % A.p).any()

    def test_concatenation_vanishing(self, built):
        # appending a residue to the maximal sequence of size 2 gives a
        # nonzero idempotent at size 3 exactly when the result is the
        # maximal sequence of some one-column shape
        params3, _, images3, _ = built[(3, 2)]
        params2, _, _, _ = built[(2, 2)]
        imax2 = C.i_lambda(C.mu_max(2, 2), params2.mc)
        lam_seqs = {C.i_lambda(lam, params3.mc)
                    for lam in C.one_column_shapes(3, 2)}
        for iota in range(params3.e):
            iseq = imax2 + (iota,)
            assert (iseq in images3.E) == (iseq in lam_seqs)

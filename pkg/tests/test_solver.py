import itertools
import random

import pytest

from mouldnf import Frequency, MouldSolver, Word, check_alternal, mexp, verify_equation
from mouldnf.alphabet import beta
from mouldnf.estimates import default_eta, fit_growth_constants
from mouldnf.exact import QI

PHI = (1 + 5 ** 0.5) / 2

MIXED_ALPHABET = ((1, 0), (1, -1), (2, -1))  # (2,-1) resonant for omega=(1,2)


def words_over(letters, r_max):
    for r in range(1, r_max + 1):
        for combo in itertools.product(letters, repeat=r):
            yield Word(combo)


class TestClosedForms:
    def test_resonant_single_letter(self, rational_freq_float):
        solver = MouldSolver(rational_freq_float)
        F, S, N = solver.values(Word([(2, -1)]))
        assert (F, S, N) == (1, 0, 0)

    def test_nonresonant_single_letter(self, golden_freq):
        solver = MouldSolver(golden_freq)
        lam = 1j  # i<(1,0), omega>
        F, S, N = solver.values(Word([(1, 0)]))
        assert F == 0
        assert S == pytest.approx(1 / lam)
        assert N == pytest.approx(1 / lam)

    def test_cancelling_pair(self, golden_freq):
        solver = MouldSolver(golden_freq)
        lam = 1j
        F, S, N = solver.values(Word([(1, 0), (-1, 0)]))
        assert F == pytest.approx(-1 / lam)
        assert S == pytest.approx(-1 / (2 * lam ** 2))
        assert N == pytest.approx(0)
        assert solver.g_of(Word([(1, 0), (-1, 0)])) == pytest.approx(0)

    def test_g_single_letters(self, golden_freq, rational_freq_float):
        assert MouldSolver(golden_freq).g_of(Word([(1, 0)])) == pytest.approx(1 / 1j)
        assert MouldSolver(rational_freq_float).g_of(Word([(2, -1)])) == 0

    def test_exact_mode_closed_forms(self, rational_freq):
        solver = MouldSolver(rational_freq)
        F, S, N = solver.values(Word([(2, -1)]))
        assert F == QI(1, 0) and S == QI(0, 0) and N == QI(0, 0)
        F1, S1, N1 = solver.values(Word([(1, 0)]))
        # 1/lambda with lambda = i: equals -i
        assert F1 == QI(0, 0) and S1 == QI(0, -1) and N1 == QI(0, -1)


class TestEquation:
    def test_exact_residual_is_zero(self, rational_freq):
        solver = MouldSolver(rational_freq)
        rep = verify_equation(solver, 3, MIXED_ALPHABET)
        assert rep.exact
        assert rep.max_residual == 0.0
        assert rep.max_nabla_f == 0.0
        assert rep.max_gauge == 0.0
        assert rep.ok

    def test_float_residual_small(self, golden_solver):
        rep = verify_equation(golden_solver, 4, ((1, 0), (0, 1), (-1, 0)), tol=1e-9)
        assert rep.ok
        assert rep.max_residual <= 1e-9 * rep.scale

    def test_nabla_f_vanishes_off_resonance(self, golden_solver, golden_freq):
        from mouldnf import nabla

        NF = nabla(golden_solver.F_mould, golden_freq)
        for w in words_over(((1, 0), (0, 1)), 3):
            assert NF(w) == 0


class TestStructure:
    def test_f_supported_on_resonant_words(self, golden_solver, golden_freq):
        from mouldnf import is_resonant

        for w in words_over(((1, 0), (-1, 0), (0, 1)), 4):
            if not is_resonant(w, golden_freq):
                assert golden_solver.values(w)[0] == 0

    def test_s_equals_exp_g(self, golden_solver):
        E = mexp(golden_solver.G_mould)
        for w in words_over(((1, 0), (-1, 0)), 5):
            assert complex(E(w)) == pytest.approx(complex(golden_solver.values(w)[1]), abs=1e-12)

    def test_alternality_of_f_and_g(self, rational_freq_float):
        solver = MouldSolver(rational_freq_float)
        for mould in (solver.F_mould, solver.G_mould):
            rep = check_alternal(mould, 4, MIXED_ALPHABET, tol=1e-10)
            assert rep.ok, rep.violations[:3]

    def test_homogeneity_under_frequency_scaling(self):
        # scaling omega by c multiplies every eigenvalue by c, so the
        # value on an r-word scales by c^-(r-1) for F and c^-r for G.
        c = 2.0
        base = Frequency((1.0, PHI))
        scaled = Frequency((c, c * PHI))
        s1, s2 = MouldSolver(base), MouldSolver(scaled)
        for w in words_over(((1, 0), (-1, 0), (0, 1)), 4):
            r = w.r
            f1 = complex(s1.values(w)[0])
            f2 = complex(s2.values(w)[0])
            assert f2 == pytest.approx(f1 * c ** (-(r - 1)), rel=1e-9, abs=1e-15)
            g1 = complex(s1.g_of(w))
            g2 = complex(s2.g_of(w))
            assert g2 == pytest.approx(g1 * c ** (-r), rel=1e-9, abs=1e-15)


class TestGrowthBound:
    def test_fitted_constants_bound_fresh_sample(self, golden_freq):
        # constants fitted as exact suprema over all words of each
        # length; a fresh random sample cannot exceed them.
        letters = ((1, 0), (-1, 0), (0, 1))
        rho, tau = 1.0, 1.0
        from mouldnf import diophantine_alpha

        alpha = diophantine_alpha(golden_freq, tau, 5)
        f_list, g_list = fit_growth_constants(
            golden_freq, letters, 4, rho, alpha, tau, limit=3 ** 4 + 1
        )
        solver = MouldSolver(golden_freq)
        rng = random.Random(99)
        import math

        for _ in range(50):
            r = rng.randint(1, 4)
            w = Word(tuple(rng.choice(letters) for _ in range(r)))
            eta_r = default_eta(rho, alpha, tau, r)
            base = (tau / (math.e * eta_r)) ** tau
            shape = math.exp(eta_r * beta(w, tau, golden_freq))
            fv = abs(complex(solver.values(w)[0]))
            gv = abs(complex(solver.g_of(w)))
            assert fv <= f_list[r - 1] * base ** (r - 1) * shape * (1 + 1e-12)
            assert gv <= g_list[r - 1] * base ** r * shape * (1 + 1e-12)


class TestGaugeHook:
    def test_nonzero_gauge_accepted(self, rational_freq_float):
        # resonant alternal gauge supported on the resonant letter
        from mouldnf.mould import from_table

        gauge = from_table({Word([(2, -1)]): 0.5})
        solver = MouldSolver(rational_freq_float, gauge=gauge)
        F, S, N = solver.values(Word([(2, -1)]))
        assert N == 0.5
        assert S == pytest.approx(0.5)

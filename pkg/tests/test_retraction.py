import math
import random
from fractions import Fraction as F

import pytest

from wellrounded.enumeration import ShortVectorQuery, enumerate_short, minimal_vectors
from wellrounded.exact import Matrix, SymmetricForm, det
from wellrounded.paperlab import counterexample
from wellrounded.retraction import (
    AlreadyWellRounded,
    OutOfRange,
    decompose,
    event,
    flow_at,
    flow_step,
    invariant_factor,
    retract_to_X,
)
from wellrounded.sampling import pd_form, unimodular
from wellrounded.strata import classify

from oracles import bisect_event, qvalue

SKEW2 = SymmetricForm.diag([4, F(1, 4)])
SKEW3 = SymmetricForm.diag([F(1, 4), 1, 4])


class TestDecompose:
    def test_two_dimensional(self):
        d = decompose(SKEW2)
        d.certify()
        assert d.k == 1
        assert d.M1 == Matrix.diag([0, F(1, 4)])
        assert d.M2 == Matrix.diag([4, 0])

    def test_well_rounded_inputs(self):
        for q in (SymmetricForm.identity(3), counterexample(5).gram):
            d = decompose(q)
            d.certify()
            assert d.k == q.n
            assert d.M1 == q.matrix
            assert d.M2 == Matrix.zeros(q.n, q.n)

    def test_random_forms_certify(self):
        rng = random.Random(1)
        for _ in range(20):
            decompose(pd_form(rng.randint(2, 5), rng)).certify()


class TestEvent:
    def test_two_dimensional(self):
        ev = event(SKEW2)
        assert ev.r == 16
        assert ev.joining_vectors == ((1, 0),)
        assert (ev.k_before, ev.new_k) == (1, 2)

    def test_two_dimensional_bisection(self):
        # e1 has no component along the systole line: p2 = 0, q2 = 4, s2 = 1/4
        lam = bisect_event(0.0, 4.0, 0.25, n=2, k=1)
        assert math.exp(2 * 2 * lam) == pytest.approx(16, rel=1e-9)
        assert float(event(SKEW2).tau()) == pytest.approx(lam, rel=1e-9)

    def test_three_dimensional(self):
        ev = event(SKEW3)
        assert ev.r == 4
        assert ev.joining_vectors == ((0, 1, 0),)
        assert ev.new_k == 2

    def test_vectors_at_or_beyond_the_systole_never_join(self):
        # perturbed hexagonal form: e1 alone is minimal, e1+e2 has p2 >= s2
        q = SymmetricForm([[1, F(1, 2)], [F(1, 2), F(5, 4)]])
        d = decompose(q)
        assert d.k == 1
        ev = event(q)
        for v in ev.joining_vectors:
            q2 = qvalue(d.M2.rows, v)
            p2 = qvalue(d.M1.rows, v)
            assert q2 > 0 and p2 < d.minimal.systole_sq
            assert ev.r * (d.minimal.systole_sq - p2) == q2

    def test_already_well_rounded(self):
        with pytest.raises(AlreadyWellRounded):
            event(SymmetricForm.identity(2))

    def test_tau_decimal(self):
        assert event(SKEW2).tau_decimal().startswith("0.693147180559945")


class TestFlowStep:
    def test_two_dimensional(self):
        nxt, ev = flow_step(SKEW2)
        assert nxt == SymmetricForm.diag([4, 4])
        c = classify(nxt)
        assert c.in_X and c.in_Y

    def test_three_dimensional(self):
        nxt, ev = flow_step(SKEW3)
        assert nxt == SymmetricForm.diag([1, 1, 4])
        assert classify(nxt).k == 2
        assert nxt.det() == 4 ** 1 * SKEW3.det() == 4


class TestFlowAt:
    def test_endpoints_and_interior(self):
        assert flow_at(SKEW2, 1) == SKEW2
        mid = flow_at(SKEW2, 4)
        assert mid == SymmetricForm.diag([4, 1])
        assert minimal_vectors(mid).vectors == ((0, 1),)
        end = flow_at(SKEW2, 16)
        assert end == SymmetricForm.diag([4, 4])
        assert classify(end).k == 2

    @pytest.mark.parametrize("t", [F(1, 2), 17, F(33, 2)])
    def test_out_of_range(self, t):
        with pytest.raises(OutOfRange):
            flow_at(SKEW2, t)

    def test_accepts_rational_strings(self):
        assert flow_at(SKEW2, "4") == SymmetricForm.diag([4, 1])


class TestRetract:
    def test_identity(self):
        tr = retract_to_X(SymmetricForm.identity(4))
        assert tr.steps == ()
        assert tr.final == SymmetricForm.identity(4)

    def test_two_dimensional(self):
        tr = retract_to_X(SKEW2)
        assert tr.ratios == (16,)
        assert tr.final == SymmetricForm.diag([4, 4])

    def test_three_dimensional(self):
        tr = retract_to_X(SKEW3)
        assert tr.ratios == (4, 4)
        assert tr.steps[0].after == SymmetricForm.diag([1, 1, 4])
        assert tr.steps[1].event.joining_vectors == ((0, 0, 1),)
        assert tr.final == SymmetricForm.diag([4, 4, 4])
        assert classify(tr.final).in_Y

    def test_trace_json(self):
        (step,) = retract_to_X(SKEW2).to_json()
        assert step["r"] == "16"
        assert step["joining"] == [[1, 0]]
        assert (step["k_before"], step["k_after"]) == (1, 2)
        assert step["gram_after"] == [["4", "0"], ["0", "4"]]
        assert step["tau_decimal"].startswith("0.6931")


def _random_forms(seed, count, dims=(2, 3, 4, 5)):
    rng = random.Random(seed)
    return [pd_form(rng.choice(dims), rng) for _ in range(count)], rng


def test_step_laws_on_random_forms():
    forms, rng = _random_forms(31, 30)
    for q in forms:
        tr = retract_to_X(q)
        assert len(tr.steps) <= q.n - 1
        assert classify(tr.final).in_X
        for step in tr.steps:
            ev = step.event
            k, n = ev.k_before, q.n
            assert ev.new_k > k
            assert step.after.det() == ev.r ** k * step.before.det()
            assert invariant_factor(step) == ev.r ** (n - k)
            assert ev.r > 1
            # event sharpness: joining vectors reach r * s2 exactly
            s2 = minimal_vectors(step.before).systole_sq
            for v in ev.joining_vectors:
                assert step.after.value(v) == ev.r * s2
            assert classify(step.after).k == ev.new_k
            assert set(minimal_vectors(step.before).vectors) <= set(minimal_vectors(step.after).vectors)


def test_minimal_set_constant_inside_flow():
    forms, rng = _random_forms(32, 15)
    for q in forms:
        for step in retract_to_X(q).steps:
            d = decompose(step.before)
            s2 = d.minimal.systole_sq
            for _ in range(3):
                t = 1 + (step.event.r - 1) * F(rng.randint(1, 99), 100)
                qt = d.at(t)
                assert minimal_vectors(qt).vectors == d.minimal.vectors
                for v in d.minimal.vectors:
                    assert qt.value(v) == t * s2
                for w, val in enumerate_short(ShortVectorQuery(step.before, s2 * (1 + t))):
                    if w not in d.minimal.vectors:
                        assert qt.value(w) > t * s2


def test_unimodular_equivariance_of_ratios():
    forms, rng = _random_forms(33, 15)
    for q in forms:
        u = unimodular(q.n, rng)
        assert retract_to_X(q.transform(u)).ratios == retract_to_X(q).ratios


def test_simultaneous_joins_raise_rank_by_more_than_one():
    # e2 and e3 join at the same ratio, so rank jumps from 1 to 3 in one event
    tr = retract_to_X(SymmetricForm.diag([F(1, 4), 1, 1]))
    assert len(tr.steps) == 1
    ev = tr.steps[0].event
    assert (ev.k_before, ev.new_k, ev.r) == (1, 3, 4)
    assert ev.joining_vectors == ((0, 0, 1), (0, 1, 0))


def test_determinant_consistency_with_det():
    nxt, ev = flow_step(SKEW3)
    assert det(nxt.matrix) == nxt.det()

"""Shared builders for hand-crafted instances and policy states."""
import numpy as np
import pytest

from decoding_game.types import CandidateRecord, GameConfig, GameInstance, PolicyState


def make_instance(g_correct, g_incorrect=None, v_correct=None, v_incorrect=None,
                  da=None, gold=None, instance_id="t0"):
    """Instance from raw score vectors; omitted branches default to mirrors."""
    n = len(g_correct)
    if g_incorrect is None:
        g_incorrect = [0.0] * n
    if v_correct is None:
        v_correct = [0.0] * n
    if v_incorrect is None:
        v_incorrect = [-x for x in v_correct]
    cands = tuple(
        CandidateRecord(
            candidate_id=f"c{j}",
            g_correct=float(g_correct[j]),
            g_incorrect=float(g_incorrect[j]),
            v_correct=float(v_correct[j]),
            v_incorrect=float(v_incorrect[j]),
            da=None if da is None else float(da[j]),
        )
        for j in range(n)
    )
    inst = GameInstance(instance_id=instance_id, candidates=cands, gold_candidate_id=gold)
    inst.validate()
    return inst


def make_state(g_rows, v_rows=None, t=1):
    """PolicyState with given (2, n) action rows; beliefs mirror the opponent."""
    a_g = np.asarray(g_rows, dtype=float)
    a_v = a_g.copy() if v_rows is None else np.asarray(v_rows, dtype=float)
    state = PolicyState(a_g=a_g.copy(), a_v=a_v.copy(), b_g=a_v.copy(), b_v=a_g.copy(), t=t)
    state.validate()
    return state


def agreeing_instance():
    """n = 2 instance whose generator and verifier inits coincide exactly.

    a_g[correct] = softmax(log 0.7, log 0.3) = (0.7, 0.3) and the verifier's
    pair-softmax column normalizes to the same rows, so the first step keeps
    both players identical and the run converges immediately.
    """
    m0 = np.log(0.7 / 0.3)
    return make_instance(
        g_correct=[np.log(0.7), np.log(0.3)],
        g_incorrect=[np.log(0.3), np.log(0.7)],
        v_correct=[m0 / 2, -m0 / 2],
        v_incorrect=[-m0 / 2, m0 / 2],
        instance_id="agree0",
    )


@pytest.fixture
def default_cfg():
    return GameConfig()

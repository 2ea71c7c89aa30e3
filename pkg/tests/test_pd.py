# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

from fractions import Fraction

import pytest

from PCSteiner.Planar.GEN import generate
from PCSteiner.Planar.GRAPH import ValidationError, WeightedGraph
from PCSteiner.Planar.INSTANCE import FOREST, NotNormalizedError, PcInstance, evaluate, normalizeTerminals
from PCSteiner.Planar.PD import (ComponentRecord, DualAssignment, EventLog, PrimalDualForest, TerminalState,
                                 certifiedRatio, checkInactiveDegrees, extractTree, processHistory,
                                 replayEvents, runPrimalDual, runScaled, scaleInstance, verifyDual)
from PCSteiner.Planar.STEINER import bruteForcePcsf


def test_cheap_pair_is_paid(edgeForest):
    instance = normalizeTerminals(edgeForest(1))
    solution, dual, events = runPrimalDual(instance)
    assert solution.edges == ()
    assert solution.cost == 1
    assert dual.value() == 1
    assert [event['kind'] for event in events.events] == ['deactivate', 'die', 'deactivate', 'die']


def test_expensive_pair_is_connected(edgeForest):
    instance = normalizeTerminals(edgeForest(6))
    solution, dual, events = runPrimalDual(instance)
    assert solution.edges == (0,)
    assert solution.cost == 2
    assert dual.value() == 2
    assert certifiedRatio(solution, dual) == 1
    assert events.ofKind('merge')[0]['time'] == '1'
    assert events.ofKind('satisfy') == [{'time': '1', 'kind': 'satisfy', 'pair': 0}]


def test_tight_edge_wins_a_tie(edgeForest):
    solution, _, events = runPrimalDual(normalizeTerminals(edgeForest(2)))
    assert solution.edges == (0,)
    assert solution.cost == 2
    assert events.events[0]['kind'] == 'merge'


def test_needs_normalized_forest(edgeForest, edgeTree):
    with pytest.raises(NotNormalizedError):
        PrimalDualForest(edgeForest(1))
    with pytest.raises(NotNormalizedError):
        PrimalDualForest(edgeTree(1))


def test_dual_certificate(edgeForest):
    instance = normalizeTerminals(edgeForest(6))
    engine = PrimalDualForest(instance, checkInvariants=True)
    solution, dual, _ = engine.run()
    report = verifyDual(dual, instance)
    assert report['passed']
    assert report['value'] == 2
    assert engine.checkChargeLedger()['passed']
    assert engine.invariantViolations == []
    assert dual.toDict() == {'y': [[0, 0, "1"], [0, 1, "1"]]}


def test_overloaded_dual_is_rejected(edgeForest):
    instance = normalizeTerminals(edgeForest(6))
    _, dual, _ = runPrimalDual(instance)
    dual.add(0, 0, Fraction(1, 2))
    kinds = set(v['kind'] for v in verifyDual(dual, instance)['violations'])
    assert 'edge' in kinds


@pytest.mark.parametrize("seed", range(6))
def test_within_twice_the_dual_and_four_times_optimum(seed):
    instance = generate('grid', seed=seed, pairs=3, rows=2, cols=3)
    encoded = normalizeTerminals(instance)
    engine = PrimalDualForest(encoded, checkInvariants=True)
    solution, dual, events = engine.run()
    _, optimum = bruteForcePcsf(instance)
    assert verifyDual(dual, encoded)['passed']
    assert engine.checkChargeLedger()['passed']
    assert engine.invariantViolations == []
    assert dual.value() <= optimum
    assert solution.cost <= 4 * dual.value()
    assert checkInactiveDegrees(encoded.graph, replayEvents(events), solution.edges) == []


def test_event_log_round_trip(edgeForest):
    _, _, events = runPrimalDual(normalizeTerminals(edgeForest(6)))
    restored = EventLog.fromJson(events.toJson())
    assert restored == events
    components = replayEvents(restored)
    assert components[2].members == frozenset([0, 1])
    assert components[2].children == (0, 1)


def test_replay_rejects_bad_merge():
    log = EventLog(2, events=[{'time': '1', 'kind': 'merge', 'edge': 0, 'components': [0, 5], 'into': 2}])
    with pytest.raises(ValidationError):
        replayEvents(log)
    with pytest.raises(ValidationError):
        EventLog.fromJson("not json")


def test_scale_instance(edgeForest):
    scaled = scaleInstance(edgeForest(3), 1)
    assert scaled.pairs[0].penalty == 6
    with pytest.raises(ValidationError):
        scaleInstance(edgeForest(3), 0)


def test_scaled_run_is_evaluated_unscaled(edgeForest):
    instance = normalizeTerminals(edgeForest(Fraction(3, 2)))
    solution, dual = runScaled(instance, Fraction(1, 2))
    assert solution.edges == (0,)
    assert solution.cost == 2
    assert dual.value() == 2


def test_extract_tree_keeps_root_component(edgeTree):
    instance = edgeTree(6)
    encoded = normalizeTerminals(instance)
    solution, _, _ = runPrimalDual(encoded)
    assert extractTree(instance, encoded, solution.edges) == (0,)
    assert evaluate(instance, (0,)).cost == 2


def test_process_history_without_components():
    state = TerminalState(pair=0, side=0, vertex=0, penalty=Fraction(6))
    assert processHistory(state, [], DualAssignment()) == 3
    assert state.remaining == 3


def test_process_history_charges_smallest_first():
    components = [ComponentRecord(0, frozenset([0]), Fraction(0), uncharged=Fraction(1)),
                  ComponentRecord(1, frozenset([0, 1]), Fraction(0), uncharged=Fraction(4))]
    state = TerminalState(pair=0, side=0, vertex=0, penalty=Fraction(4), history=[1, 0])
    dual = DualAssignment()
    assert processHistory(state, components, dual) == 0
    assert dual.pairY == {(0, 0): 1, (0, 1): 1}
    assert components[0].uncharged == 0
    assert components[1].uncharged == 3
    assert state.charged == 2


@pytest.fixture
def lateMerge():
    """ Hub 4 with four leaves: pair (0, 3) is cheap, pair (1, 2) is expensive.

    Leaf 3 exhausts at time 1. At time 2 leaf 2 and the dead leaf 3 both reach the
    hub; the lower edge id goes first, so pair (1, 2) is satisfied and uses up the
    shared moat growth before leaf 0 meets its dead partner.
    """
    graph = WeightedGraph(5, [(0, 4, Fraction(3, 4)), (1, 4, Fraction(1, 4)), (2, 4, Fraction(15, 4)),
                              (3, 4, Fraction(11, 4))])
    return normalizeTerminals(PcInstance(graph, FOREST, pairs=((0, 3, 2), (1, 2, 20))))


def test_partner_of_exhausted_endpoint_dies_on_merge(lateMerge):
    assert lateMerge.graph.n == 5
    engine = PrimalDualForest(lateMerge, checkInvariants=True)
    solution, dual, events = engine.run()
    late, early = engine.endpoints(0)
    assert (early.vertex, early.diedOn, early.charged) == (3, 'exhaustion', 1)
    assert (late.vertex, late.diedOn, late.charged) == (0, 'merge', Fraction(1, 2))
    assert dual.pairY[(0, 0)] == Fraction(1, 2)
    assert dual.pairY[(0, 3)] == 1
    assert [(e['time'], e['vertex']) for e in events.ofKind('die')] == [('1', 3), ('2', 0)]
    assert engine.checkChargeLedger()['passed']
    assert engine.invariantViolations == []
    assert solution.edges == (1, 2)
    assert solution.cost == 6
    assert dual.value() == Fraction(11, 2)


def test_short_charge_on_exhaustion_is_reported(lateMerge):
    engine = PrimalDualForest(lateMerge)
    engine.run()
    early = engine.endpoints(0)[1]
    early.remaining = Fraction(1)
    kinds = [v['kind'] for v in engine.checkChargeLedger()['violations']]
    assert kinds == ['terminal', 'pair']


def test_merge_killed_endpoint_on_grid():
    encoded = normalizeTerminals(generate('grid', seed=3, pairs=3, rows=2, cols=3))
    engine = PrimalDualForest(encoded)
    engine.run()
    states = {state.vertex: state for state in engine.endpoints(2)}
    assert states[11].diedOn == 'exhaustion'
    assert states[11].charged == states[11].penalty / 2
    assert states[10].diedOn == 'merge'
    assert states[10].charged == 0
    assert engine.checkChargeLedger()['passed']

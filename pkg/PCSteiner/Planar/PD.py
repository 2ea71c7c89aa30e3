# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Primal-dual prize-collecting Steiner forest

Moats grow uniformly around every active component. A component starts with
``pi/2`` potential per pair endpoint it hosts and spends it while growing. Growth
stops on the first tight edge or exhausted potential; pairs that become connected
are satisfied, pairs whose component runs dry die. Every penalty spent by a pair
is charged back to the moats it grew through, which yields a feasible dual split
``y[i, S]`` and so a certified lower bound.
'''

import dataclasses
import json
import logging
from fractions import Fraction

from . import AppLogger
from .GRAPH import ValidationError, connectivity, formatRational, toRational
from .INSTANCE import FOREST, NotNormalizedError, Pair, baseEdges, evaluate

logger = logging.getLogger(__name__)

ALIVE = 'alive'
SATISFIED = 'satisfied'
DEAD = 'dead'

EXHAUSTION = 'exhaustion'

MERGE = 'merge'
DEACTIVATE = 'deactivate'
SATISFY = 'satisfy'
DIE = 'die'


@dataclasses.dataclass
class ComponentRecord:
    """ One member of the laminar family of components ever formed. """
    id: int
    members: frozenset
    potential: Fraction
    uncharged: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    active: bool = True
    formedAt: Fraction = Fraction(0)
    children: tuple = ()
    current: bool = True
    deactivated: bool = False
    closedAt: Fraction = None
    unchargedAtClose: Fraction = None


@dataclasses.dataclass
class TerminalState:
    pair: int
    side: int
    vertex: int
    penalty: Fraction
    status: str = ALIVE
    history: list = dataclasses.field(default_factory=list)
    remaining: Fraction = None
    diedOn: str = None

    @property
    def charged(self):
        if self.remaining is None:
            return Fraction(0)
        return self.penalty / 2 - self.remaining


class EventLog:
    """ Replayable record of a moat-growing run.

    :param vertexCount: Number of singleton components the run started from.
    :type vertexCount: int
    :param inactive: Singletons that started without potential.
    :type inactive: list, optional
    :param events: Event dictionaries in processing order.
    :type events: list, optional
    """
    def __init__(self, vertexCount, inactive=(), events=()):
        self.vertexCount = vertexCount
        self.inactive = list(inactive)
        self.events = list(events)

    def __eq__(self, other):
        return isinstance(other, EventLog) and self.toDict() == other.toDict()

    def __len__(self):
        return len(self.events)

    def record(self, time, kind, **fields):
        event = {'time': formatRational(time), 'kind': kind}
        event.update(fields)
        self.events.append(event)

    def ofKind(self, kind):
        return [event for event in self.events if event['kind'] == kind]

    def toDict(self):
        return {'vertexCount': self.vertexCount, 'inactive': list(self.inactive), 'events': list(self.events)}

    def toJson(self):
        return json.dumps(self.toDict(), indent=2)

    @classmethod
    def fromJson(cls, text):
        try:
            data = json.loads(text)
            return cls(int(data['vertexCount']), data.get('inactive', []), data.get('events', []))
        except (ValueError, KeyError, TypeError) as e:
            raise ValidationError("Could not read event log, reason: {}".format(e))


@dataclasses.dataclass(frozen=True)
class ReplayedComponent:
    id: int
    members: frozenset
    formedAt: Fraction
    children: tuple = ()
    deactivated: bool = False


def replayEvents(log):
    """ Rebuilds the laminar component family from an event log.

    :param log: The log of a finished run.
    :type log: EventLog
    :raises ValidationError: When the log merges unknown or closed components.
    :return: Components keyed by id.
    :rtype: dict
    """
    inactive = set(log.inactive)
    components = {v: ReplayedComponent(v, frozenset([v]), Fraction(0), deactivated=v in inactive)
                  for v in range(log.vertexCount)}
    closed = set()
    for event in log.events:
        if event['kind'] == MERGE:
            a, b = event['components']
            into = event['into']
            if a in closed or b in closed or a not in components or b not in components:
                raise ValidationError("Merge at {} joins closed or unknown components {}".format(event['time'], (a, b)))
            if into != len(components):
                raise ValidationError("Merge at {} creates component {}, expected {}".format(
                    event['time'], into, len(components)))
            closed.update((a, b))
            components[into] = ReplayedComponent(into, components[a].members | components[b].members,
                                                 toRational(event['time']), (a, b))
        elif event['kind'] == DEACTIVATE:
            c = event['component']
            if c not in components:
                raise ValidationError("Deactivation of unknown component {}".format(c))
            components[c] = dataclasses.replace(components[c], deactivated=True)
    return components


class MoatEngine:
    """ Uniform moat growth over a graph with one potential per vertex.

    Components merge on tight edges, adding their potentials, and go inactive when
    their potential is spent. Edge events precede exhaustion events at equal times;
    ties are broken by lowest edge id, then lowest component id.

    Subclasses hook into :meth:`onGrow`, :meth:`onMerge` and :meth:`onDeactivate`.

    :param graph: The graph.
    :type graph: WeightedGraph
    :param potentials: One non-negative potential per vertex.
    :type potentials: list
    """
    def __init__(self, graph, potentials, debug=False, loggingLevel='off'):
        self.logger = AppLogger.getLogger(__name__, debug, loggingLevel)
        self.graph = graph
        self.time = Fraction(0)
        self.growth = [Fraction(0)] * graph.n
        self.owner = list(range(graph.n))
        self.components = []
        self.grownEdges = []
        self.activeIds = set()
        inactive = []
        for v in range(graph.n):
            potential = toRational(potentials[v])
            record = ComponentRecord(v, frozenset([v]), potential, active=potential > 0)
            if not record.active:
                record.deactivated = True
                record.closedAt = Fraction(0)
                record.unchargedAtClose = Fraction(0)
                inactive.append(v)
            else:
                self.activeIds.add(v)
            self.components.append(record)
        self.events = EventLog(graph.n, inactive)

    def nextEvent(self):
        """ Returns ``(dt, kind, id)`` of the next event, ``None`` when everything is inactive. """
        best = None
        for e, (u, v, length) in enumerate(self.graph.edges):
            a, b = self.owner[u], self.owner[v]
            if a == b:
                continue
            rate = (a in self.activeIds) + (b in self.activeIds)
            if rate == 0:
                continue
            key = ((length - self.growth[u] - self.growth[v]) / rate, 0, e)
            if best is None or key < best:
                best = key
        for c in self.activeIds:
            key = (self.components[c].potential, 1, c)
            if best is None or key < best:
                best = key
        return best

    def advance(self, dt):
        if dt <= 0:
            return
        for c in sorted(self.activeIds):
            record = self.components[c]
            record.potential -= dt
            record.uncharged += dt
            record.y += dt
            for v in record.members:
                self.growth[v] += dt
            self.onGrow(record, dt)
        self.time += dt

    def _close(self, record):
        record.current = False
        if record.closedAt is None:
            record.closedAt = self.time
            record.unchargedAtClose = record.uncharged

    def merge(self, e):
        u, v, _ = self.graph.edges[e]
        first, second = self.components[self.owner[u]], self.components[self.owner[v]]
        merged = ComponentRecord(len(self.components), first.members | second.members,
                                 first.potential + second.potential, formedAt=self.time,
                                 children=(first.id, second.id))
        for record in (first, second):
            self._close(record)
            self.activeIds.discard(record.id)
        self.components.append(merged)
        self.activeIds.add(merged.id)
        for x in merged.members:
            self.owner[x] = merged.id
        self.grownEdges.append(e)
        self.events.record(self.time, MERGE, edge=e, components=[first.id, second.id], into=merged.id)
        self.logger.debug("Edge {} tight at {}, components {} and {} merged into {}".format(
            e, self.time, first.id, second.id, merged.id))
        self.onMerge(merged, first, second)

    def deactivate(self, c):
        record = self.components[c]
        record.active = False
        record.deactivated = True
        self.activeIds.discard(c)
        if record.closedAt is None:
            record.closedAt = self.time
            record.unchargedAtClose = record.uncharged
        self.events.record(self.time, DEACTIVATE, component=c)
        self.logger.debug("Component {} exhausted at {}".format(c, self.time))
        self.onDeactivate(record)

    def onGrow(self, record, dt):
        pass

    def onMerge(self, merged, first, second):
        pass

    def onDeactivate(self, record):
        pass

    def afterEvent(self):
        pass

    def grow(self):
        """ Runs the growth phase until every component is inactive. """
        while True:
            event = self.nextEvent()
            if event is None:
                break
            dt, kind, ident = event
            self.advance(dt)
            if kind == 0:
                self.merge(ident)
            else:
                self.deactivate(ident)
            self.afterEvent()
        return self.grownEdges

    def currentComponents(self):
        return [record for record in self.components if record.current]

    def descendants(self, c):
        """ Ids of every component contained in component ``c``, itself included. """
        found = []
        stack = [c]
        while stack:
            x = stack.pop()
            found.append(x)
            stack.extend(self.components[x].children)
        return found


class DualAssignment:
    """ Sparse dual split ``y[i, S]`` over the component family of a run.

    :param pairY: Nonzero charges keyed by ``(pair index, component id)``.
    :type pairY: dict
    :param componentY: Total growth ``y(S)`` keyed by component id.
    :type componentY: dict
    :param members: Vertex set of every component id.
    :type members: dict
    """
    def __init__(self, pairY=None, componentY=None, members=None):
        self.pairY = dict(pairY or {})
        self.componentY = dict(componentY or {})
        self.members = dict(members or {})

    def add(self, pair, component, value):
        if value:
            key = (pair, component)
            self.pairY[key] = self.pairY.get(key, Fraction(0)) + value

    def value(self):
        return sum(self.pairY.values(), Fraction(0))

    def chargedTo(self, component):
        return sum((y for (i, c), y in self.pairY.items() if c == component), Fraction(0))

    def toDict(self):
        """ Returns the exportable certificate.

        .. code-block:: text

            {
                "y":[[0, 4, "1/2"], [1, 4, "3/4"]]
            }

        :rtype: dict

        """
        return {'y': [[i, c, formatRational(y)] for (i, c), y in sorted(self.pairY.items())]}

    def toJson(self):
        return json.dumps(self.toDict())


def verifyDual(dual, instance):
    """ Checks a dual split against an instance.

    The capacity of every edge must cover the charges of the components it leaves,
    every pair may spend at most its penalty, and a pair may only charge components
    that separate its endpoints.

    :return: Report dictionary

    .. code-block:: text

        {
            "passed":true,
            "value":Fraction(3, 2),
            "violations":[]
        }

    :rtype: dict
    """
    violations = []
    perComponent = {}
    perPair = {}
    for (i, c), y in dual.pairY.items():
        if y < 0:
            violations.append({'kind': 'negative', 'pair': i, 'component': c, 'value': y})
        perComponent[c] = perComponent.get(c, Fraction(0)) + y
        perPair[i] = perPair.get(i, Fraction(0)) + y
        members = dual.members.get(c)
        if members is None:
            violations.append({'kind': 'unknown-component', 'pair': i, 'component': c})
            continue
        pair = instance.pairs[i]
        if (pair.s in members) == (pair.t in members):
            violations.append({'kind': 'separation', 'pair': i, 'component': c})

    for e, (u, v, length) in enumerate(instance.graph.edges):
        load = sum((y for c, y in perComponent.items()
                    if c in dual.members and (u in dual.members[c]) != (v in dual.members[c])), Fraction(0))
        if load > length:
            violations.append({'kind': 'edge', 'edge': e, 'load': load, 'capacity': length})
    for i, spent in sorted(perPair.items()):
        if not (0 <= i < len(instance.pairs)):
            violations.append({'kind': 'unknown-pair', 'pair': i})
        elif spent > instance.pairs[i].penalty:
            violations.append({'kind': 'pair', 'pair': i, 'load': spent, 'capacity': instance.pairs[i].penalty})
    return {'passed': not violations, 'value': dual.value(), 'violations': violations}


def certifiedRatio(solution, dual):
    """ ``Cost(F) / dual value``, ``None`` for a zero dual. """
    value = dual.value()
    if value == 0:
        return None
    return solution.cost / value


class PrimalDualForest(MoatEngine):
    """ The prize-collecting Steiner forest primal-dual run on a normalized instance.

    :param instance: Normalized forest instance.
    :type instance: PcInstance
    :param checkInvariants: Evaluates moat conservation after every event, defaults to False
    :type checkInvariants: bool, optional
    :param debug: Debug logging control, defaults to False
    :type debug: bool, optional
    :param loggingLevel: One of 'off', 'error' or 'full' to control file logging, defaults to 'off'
    :type loggingLevel: str, optional
    :raises NotNormalizedError: When the instance is not a normalized forest instance.
    """
    def __init__(self, instance, checkInvariants=False, debug=False, loggingLevel='off'):
        if instance.mode != FOREST or not instance.normalized:
            raise NotNormalizedError("Primal-dual needs a terminal-normalized forest instance")
        self.instance = instance
        self.pairIds = [i for i, pair in enumerate(instance.pairs) if pair.penalty > 0]
        potentials = [Fraction(0)] * instance.graph.n
        self.terminals = []
        self.terminalsAt = {}
        for i in self.pairIds:
            pair = instance.pairs[i]
            for side, x in enumerate((pair.s, pair.t)):
                state = TerminalState(i, side, x, pair.penalty, history=[x])
                self.terminals.append(state)
                self.terminalsAt.setdefault(x, []).append(state)
                potentials[x] += pair.penalty / 2
        super().__init__(instance.graph, potentials, debug, loggingLevel)
        self.dual = DualAssignment()
        self.checkInvariants = checkInvariants
        self.invariantViolations = []
        self.satisfied = []
        self.forest = None

    def endpoints(self, i):
        return [state for state in self.terminals if state.pair == i]

    def aliveIn(self, record):
        return [state for state in self.terminals if state.status == ALIVE and state.vertex in record.members]

    def processHistory(self, state):
        """ Charges ``pi/2`` of a terminal to the moats in its history, smallest first.

        :param state: The terminal that just died or was united.
        :type state: TerminalState
        :return: The charge left unspent.
        :rtype: Fraction
        """
        return processHistory(state, self.components, self.dual)

    def onMerge(self, merged, first, second):
        for state in self.aliveIn(merged):
            state.history.append(merged.id)
        for i in self.pairIds:
            s, t = self.endpoints(i)
            if not ((s.vertex in first.members and t.vertex in second.members)
                    or (t.vertex in first.members and s.vertex in second.members)):
                continue
            alive = [state for state in (s, t) if state.status == ALIVE]
            for state in alive:
                leftover = self.processHistory(state)
                if leftover:
                    self.logger.debug("Terminal {} of pair {} returns {} to component {}".format(
                        state.vertex, i, leftover, merged.id))
                merged.potential -= leftover
            if len(alive) == 2:
                s.status = t.status = SATISFIED
                self.satisfied.append(i)
                self.events.record(self.time, SATISFY, pair=i)
                self.logger.debug("Pair {} satisfied at {}".format(i, self.time))
            elif len(alive) == 1:
                alive[0].status = DEAD
                alive[0].diedOn = MERGE
                self.events.record(self.time, DIE, pair=i, vertex=alive[0].vertex)
                self.logger.debug("Pair {} endpoint {} dies on meeting a dead partner".format(i, alive[0].vertex))

    def onDeactivate(self, record):
        for state in sorted(self.aliveIn(record), key=lambda x: (x.pair, x.side)):
            state.status = DEAD
            state.diedOn = EXHAUSTION
            leftover = self.processHistory(state)
            if leftover:
                self.logger.warning("Terminal {} of pair {} kept {} uncharged on exhaustion".format(
                    state.vertex, state.pair, leftover))
            self.events.record(self.time, DIE, pair=state.pair, vertex=state.vertex)

    def afterEvent(self):
        if self.checkInvariants:
            self.invariantViolations.extend(self.conservationViolations())

    def conservationViolations(self):
        """ Current components whose potential and uncharged growth do not add up to their alive charge. """
        violations = []
        for record in self.currentComponents():
            stored = record.potential + sum((self.components[c].uncharged for c in self.descendants(record.id)),
                                            Fraction(0))
            owed = sum((state.penalty / 2 for state in self.aliveIn(record)), Fraction(0))
            if record.potential < 0 or stored != owed:
                violations.append({'time': self.time, 'component': record.id, 'stored': stored, 'owed': owed,
                                   'potential': record.potential})
        return violations

    def run(self):
        """ Grows moats, then prunes the grown forest.

        :return: ``(solution, dual, events)``
        :rtype: tuple
        """
        self.grow()
        for record in self.components:
            if record.y:
                self.dual.componentY[record.id] = record.y
        self.dual.members = {record.id: record.members for record in self.components}
        pairs = [(self.instance.pairs[i].s, self.instance.pairs[i].t) for i in self.satisfied]
        self.forest = deletionPhase(self.graph, self.grownEdges, pairs)
        solution = evaluate(self.instance, self.forest)
        self.logger.info("Primal-dual forest: {} grown edges, {} kept, cost {}, dual {}".format(
            len(self.grownEdges), len(self.forest), solution.cost, self.dual.value()))
        return solution, self.dual, self.events

    def checkChargeLedger(self):
        """ Every moat is fully charged to pairs and every separated pair paid for.

        An endpoint that dies with its exhausted component has charged exactly
        ``pi/2``. An endpoint that dies on meeting its dead partner charges what
        its history still holds, at most ``pi/2``, and returns the rest to the
        merged potential. A pair can only lose its first endpoint to exhaustion,
        so every pair with a dead endpoint carries at least ``pi/2`` in total.

        :rtype: dict
        """
        violations = []
        for record in self.components:
            charged = self.dual.chargedTo(record.id)
            if charged != record.y:
                violations.append({'kind': 'component', 'component': record.id, 'y': record.y, 'charged': charged})
        for state in self.terminals:
            if state.status != DEAD:
                continue
            half = state.penalty / 2
            if (state.diedOn == EXHAUSTION and state.charged != half) or state.charged > half:
                violations.append({'kind': 'terminal', 'pair': state.pair, 'vertex': state.vertex,
                                   'diedOn': state.diedOn, 'charged': state.charged})
        for i in self.pairIds:
            ends = self.endpoints(i)
            if any(state.status == DEAD for state in ends):
                total = sum((state.charged for state in ends), Fraction(0))
                if total < self.instance.pairs[i].penalty / 2:
                    violations.append({'kind': 'pair', 'pair': i, 'charged': total})
        return {'passed': not violations, 'violations': violations}


def processHistory(state, components, dual):
    """ Walks the history of a terminal from the smallest component upwards, moving
    uncharged growth into ``y[pair, S]`` until ``pi/2`` is spent.

    :param state: Terminal being charged.
    :type state: TerminalState
    :param components: Component records indexed by id.
    :type components: list
    :param dual: Receives the charges.
    :type dual: DualAssignment
    :return: Unspent charge.
    :rtype: Fraction
    """
    remaining = state.penalty / 2
    order = sorted(state.history, key=lambda c: (len(components[c].members), components[c].formedAt, c))
    for c in order:
        if remaining == 0:
            break
        record = components[c]
        take = min(remaining, record.uncharged)
        if take > 0:
            record.uncharged -= take
            dual.add(state.pair, c, take)
            remaining -= take
    state.remaining = remaining
    return remaining


def deletionPhase(graph, grownEdges, pairs):
    """ Reverse-delete: drops every grown edge whose removal separates no pair.

    :param graph: The graph.
    :type graph: WeightedGraph
    :param grownEdges: Edge ids in insertion order.
    :type grownEdges: list
    :param pairs: ``(s, t)`` pairs that must stay connected.
    :type pairs: iterable
    :rtype: tuple
    """
    pairs = list(pairs)
    kept = list(grownEdges)
    for e in reversed(list(grownEdges)):
        trial = [f for f in kept if f != e]
        uf = connectivity(graph, trial)
        if all(uf[s] == uf[t] for s, t in pairs):
            kept = trial
    return tuple(sorted(kept))


def runPrimalDual(instance, checkInvariants=False, debug=False, loggingLevel='off'):
    """ Runs the primal-dual forest algorithm.

    :return: ``(solution, dual, events)``
    :rtype: tuple
    """
    return PrimalDualForest(instance, checkInvariants, debug, loggingLevel).run()


def checkInactiveDegrees(graph, components, forestEdges):
    """ Deactivated components crossed by exactly one forest edge.

    :param components: Replayed components keyed by id.
    :type components: dict
    :return: Ids of offending components; empty for a minimal forest.
    :rtype: list
    """
    offending = []
    for c, record in sorted(components.items()):
        if not record.deactivated:
            continue
        crossing = sum(1 for e in forestEdges
                       if (graph.edges[e][0] in record.members) != (graph.edges[e][1] in record.members))
        if crossing == 1:
            offending.append(c)
    return offending


def _checkEpsilon(epsilon):
    epsilon = toRational(epsilon)
    if not (0 < epsilon <= 1):
        raise ValidationError("Epsilon must lie in (0, 1], got {}".format(epsilon))
    return epsilon


def scaleInstance(instance, epsilon):
    """ Copy of ``instance`` with every pair penalty multiplied by ``2/epsilon``. """
    epsilon = _checkEpsilon(epsilon)
    pairs = tuple(Pair(p.s, p.t, 2 * p.penalty / epsilon) for p in instance.pairs)
    return dataclasses.replace(instance, pairs=pairs)


def runScaled(instance, epsilon, debug=False, loggingLevel='off'):
    """ Primal-dual run with penalties scaled to ``2*pi/epsilon``.

    The returned forest is evaluated against the unscaled instance.

    :raises ValidationError: When epsilon is outside ``(0, 1]``.
    :return: ``(solution, dual)``, the dual belongs to the scaled instance.
    :rtype: tuple
    """
    scaled = scaleInstance(instance, epsilon)
    engine = PrimalDualForest(scaled, debug=debug, loggingLevel=loggingLevel)
    _, dual, _ = engine.run()
    return evaluate(instance, engine.forest), dual


def extractTree(instance, encoded, edgeIds):
    """ Maps a forest of the pair encoding of a tree instance back onto the original
    graph and keeps the component of the root.

    :param instance: Original tree instance.
    :type instance: PcInstance
    :param encoded: Its normalized pair encoding.
    :type encoded: PcInstance
    :param edgeIds: Forest edge ids in the encoding.
    :type edgeIds: iterable
    :rtype: tuple
    """
    kept = baseEdges(encoded, edgeIds)
    uf = connectivity(instance.graph, kept)
    rootSet = uf[instance.root]
    return tuple(e for e in kept if uf[instance.graph.edges[e][0]] == rootSet)

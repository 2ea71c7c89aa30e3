# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Bricks, portals, the portal-connected graph and the spanner

Every face of the mortar graph that strictly encloses edges of the input graph
becomes a brick. A few evenly spaced boundary vertices of each brick act as
portals; the spanner adds, for every set of portals of a brick, an optimal
Steiner tree of that set inside the brick.
'''

import dataclasses
import json
import logging
from fractions import Fraction

from networkx.utils import UnionFind

from . import AppLogger, PCSteinerError
from .GRAPH import (ValidationError, WeightedGraph, RotationSystem, checkEmbedding, edgeSubgraph, planarRotation,
                    toJsonable, toRational)
from .MORTAR import (buildMortar, checkColumns, checkMortar, checkStripBoundaries, checkSupercolumns,
                     decomposeStrips, selectSupercolumns, spliceOpen)
from .STEINER import DreyfusWagner

logger = logging.getLogger(__name__)

NORTH = 'N'
SOUTH = 'S'
EAST = 'E'
WEST = 'W'
COLUMN = 'C'


class BudgetExceededError(PCSteinerError):
    """ Raised when a requested computation exceeds the configured budget.

    :param estimate: Rough operation count of the refused computation.
    :type estimate: int
    """
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclasses.dataclass
class Brick:
    """ The part of the graph strictly enclosed by one mortar face.

    ``boundary`` is the face walk as darts of the input graph; ``labels`` holds
    one of ``'W'``, ``'S'``, ``'E'`` or ``'N'`` per boundary dart. ``portals`` are
    positions on the boundary walk.
    """
    index: int
    boundary: tuple
    labels: tuple
    interior: tuple
    strip: int = None
    portals: tuple = ()

    def vertexAt(self, graph, position):
        return graph.tail(self.boundary[position])

    def portalVertices(self, graph):
        return [self.vertexAt(graph, p) for p in self.portals]

    def boundaryLength(self, graph):
        return sum((graph.dartLength(d) for d in self.boundary), Fraction(0))

    def boundaryEdges(self):
        return tuple(sorted(set(d >> 1 for d in self.boundary)))

    def edges(self):
        return tuple(sorted(set(self.boundaryEdges()) | set(self.interior)))


def _stripOfFaces(rotation, outer, strips):
    outerFaces = outer.rotation.faces()
    owner = {}
    for strip in strips:
        for f in sorted(strip.faces):
            owner.setdefault(rotation.faceOf(outer.dartOrigin(outerFaces[f][0])), strip)
    return owner


def _labels(boundary, strip, outer):
    if strip is None:
        return tuple(SOUTH for _ in boundary)
    north = set(outer.originalEdges(strip.north))
    columns = set()
    for column in strip.supercolumns():
        columns.update(outer.originalEdges(column.darts))
    raw = []
    for d in boundary:
        if (d >> 1) in north:
            raw.append(NORTH)
        elif (d >> 1) in columns:
            raw.append(COLUMN)
        else:
            raw.append(SOUTH)
    labels = []
    for i, label in enumerate(raw):
        if label != COLUMN:
            labels.append(label)
            continue
        previous = next((raw[(i - j) % len(raw)] for j in range(1, len(raw) + 1) if raw[(i - j) % len(raw)] != COLUMN),
                        None)
        labels.append(EAST if previous == SOUTH else WEST)
    return tuple(labels)


def enumerateBricks(graph, rotation, mortar, outer=None, strips=()):
    """ One brick per mortar face that strictly encloses at least one edge.

    :param graph: The input graph.
    :type graph: WeightedGraph
    :param rotation: Its embedding.
    :type rotation: RotationSystem
    :param mortar: The mortar graph.
    :type mortar: MortarGraph
    :param outer: The spliced graph the strips were cut from, used for labels.
    :type outer: OuterFaceGraph, optional
    :param strips: Strips of ``outer``.
    :type strips: list, optional
    :rtype: list
    """
    inMortar = set(mortar.edges)
    faces = rotation.faces()
    uf = UnionFind(range(len(faces)))
    for e in range(graph.edgeCount):
        if e not in inMortar:
            uf.union(rotation.faceOf(2 * e), rotation.faceOf(2 * e + 1))
    interiorOf = {}
    for e in range(graph.edgeCount):
        if e not in inMortar:
            interiorOf.setdefault(uf[rotation.faceOf(2 * e)], []).append(e)
    owner = _stripOfFaces(rotation, outer, strips) if outer is not None else {}

    bricks = []
    for walk in rotation.restrict(inMortar).faces():
        leader = uf[rotation.faceOf(walk[0])]
        interior = interiorOf.get(leader)
        if not interior:
            continue
        strip = None
        for f in range(len(faces)):
            if uf[f] == leader and f in owner:
                strip = owner[f]
                break
        brick = Brick(len(bricks), tuple(walk), _labels(walk, strip, outer), tuple(interior),
                      None if strip is None else strip.index)
        logger.debug("Brick {}: {} boundary darts, {} interior edges".format(brick.index, len(walk), len(interior)))
        bricks.append(brick)
    return bricks


def _checkTheta(theta):
    if int(theta) != theta or theta < 1:
        raise ValidationError("Theta must be a positive integer, got {}".format(theta))
    return int(theta)


def _arcs(graph, boundary, start):
    m = len(boundary)
    arcs = [Fraction(0)]
    for i in range(m - 1):
        arcs.append(arcs[-1] + graph.dartLength(boundary[(start + i) % m]))
    return arcs


def placePortals(brick, graph, theta):
    """ Places at most ``theta`` portals evenly around a brick.

    The walk starts at the first boundary vertex that touches an interior edge.
    The next portal is the first vertex whose arc length from the previous one
    reaches ``Length(boundary)/theta``; a vertex is never a portal twice.

    :param brick: The brick, updated in place.
    :type brick: Brick
    :param graph: The input graph.
    :type graph: WeightedGraph
    :param theta: Portal count bound.
    :type theta: int
    :return: Portal positions on the boundary walk.
    :rtype: tuple
    """
    theta = _checkTheta(theta)
    m = len(brick.boundary)
    touching = set(x for e in brick.interior for x in graph.endpoints(e))
    start = next((p for p in range(m) if brick.vertexAt(graph, p) in touching), 0)
    total = brick.boundaryLength(graph)
    portals = [start]
    if total > 0:
        step = total / theta
        arcs = _arcs(graph, brick.boundary, start)
        seen = {brick.vertexAt(graph, start)}
        last = Fraction(0)
        for i in range(1, m):
            if arcs[i] - last >= step and arcs[i] < total:
                p = (start + i) % m
                x = brick.vertexAt(graph, p)
                if x not in seen:
                    seen.add(x)
                    portals.append(p)
                last = arcs[i]
    brick.portals = tuple(portals)
    return brick.portals


def checkPortals(brick, graph, theta):
    """ Every boundary position lies within ``Length(boundary)/theta`` of a portal
    vertex, measured backwards along the walk, and there are at most ``theta`` portals.

    :rtype: dict
    """
    theta = _checkTheta(theta)
    m = len(brick.boundary)
    total = brick.boundaryLength(graph)
    bound = total / theta
    portalVertices = set(brick.portalVertices(graph))
    arcs = _arcs(graph, brick.boundary, 0)
    covering = [p for p in range(m) if brick.vertexAt(graph, p) in portalVertices]
    radius = Fraction(0)
    for q in range(m):
        if not covering:
            break
        nearest = min((arcs[q] - arcs[r]) % total if total else Fraction(0) for r in covering)
        radius = max(radius, nearest)
    violations = []
    if len(brick.portals) > theta:
        violations.append({'kind': 'count', 'count': len(brick.portals), 'bound': theta})
    if not covering or radius > bound:
        violations.append({'kind': 'coverage', 'radius': radius, 'bound': bound})
    return {'passed': not violations, 'brick': brick.index, 'count': len(brick.portals), 'radius': radius,
            'bound': bound, 'violations': violations}


class PortalConnectedGraph:
    """ The mortar graph plus one embedded copy of every brick, joined at the portals
    by zero-length edges.

    Vertices ``0 .. n-1`` are the mortar copies of the input vertices; brick copies
    follow. Mortar edges come first in ascending input id, then brick copy edges,
    then portal edges.

    :param edgeOrigin: Input edge of every mortar and brick edge, ``None`` for portal edges.
    :type edgeOrigin: tuple
    :param copyOf: Input vertex of every vertex.
    :type copyOf: tuple
    """
    def __init__(self, graph, rotation, copyOf, edgeOrigin, brickOf, portalEdges):
        self.graph = graph
        self.rotation = rotation
        self.copyOf = copyOf
        self.edgeOrigin = edgeOrigin
        self.brickOf = brickOf
        self.portalEdges = portalEdges

    def checkCopies(self, mortar, bricks):
        """ Portal edges have length 0, every mortar edge appears once and every
        interior edge appears in exactly one brick copy.
        """
        violations = []
        for e in self.portalEdges:
            if self.graph.length(e) != 0:
                violations.append({'kind': 'portal-length', 'edge': e})
        mortarCopies = [self.edgeOrigin[e] for e in range(self.graph.edgeCount) if self.brickOf[e] is None
                        and self.edgeOrigin[e] is not None]
        if sorted(mortarCopies) != sorted(mortar.edges):
            violations.append({'kind': 'mortar', 'detail': 'mortar edges not copied exactly once'})
        interior = {}
        for brick in bricks:
            for e in brick.interior:
                interior[e] = 0
        for e in range(self.graph.edgeCount):
            origin = self.edgeOrigin[e]
            if self.brickOf[e] is not None and origin in interior:
                interior[origin] += 1
        for origin, count in sorted(interior.items()):
            if count != 1:
                violations.append({'kind': 'interior', 'edge': origin, 'copies': count})
        return {'passed': not violations, 'violations': violations}


def _cornerDarts(rotation, x, before, after):
    darts = rotation.rotation[x]
    i = darts.index(before)
    found = []
    for j in range(1, len(darts)):
        d = darts[(i + j) % len(darts)]
        if d == after:
            break
        found.append(d)
    return found


def buildPortalConnected(graph, rotation, mortar, bricks):
    """ Builds the portal-connected graph with its embedding.

    Each brick copy is cut open along its boundary walk, one copy vertex per walk
    position, so its boundary is a simple cycle. The portal edge of position ``p``
    sits in the mortar corner in front of the walk dart at ``p`` and in the
    outer corner of the brick copy behind that dart.

    :rtype: PortalConnectedGraph
    """
    inMortar = sorted(mortar.edges)
    edges = [graph.edges[e] for e in inMortar]
    origin = list(inMortar)
    brickOf = [None] * len(edges)
    mortarDart = {}
    for j, e in enumerate(inMortar):
        mortarDart[2 * e], mortarDart[2 * e + 1] = 2 * j, 2 * j + 1
    mortarRotation = [[mortarDart[d] for d in darts if d in mortarDart] for darts in rotation.rotation]
    copyOf = list(range(graph.n))
    brickRotations = []
    portalEdges = []
    pending = []

    for brick in bricks:
        walk = brick.boundary
        m = len(walk)
        interior = set(brick.interior)
        cornerOf = {}
        sectors = []
        for p in range(m):
            x = graph.tail(walk[p])
            sector = [d for d in _cornerDarts(rotation, x, walk[p - 1] ^ 1, walk[p]) if (d >> 1) in interior]
            for d in sector:
                cornerOf[d] = p
            sectors.append(sector)
        base = len(copyOf)
        copyOf.extend(graph.tail(d) for d in walk)
        inner = sorted(set(x for e in brick.interior for x in graph.endpoints(e))
                       - set(graph.tail(d) for d in walk))
        innerId = {x: base + m + i for i, x in enumerate(inner)}
        copyOf.extend(inner)

        walkDart = []
        for p in range(m):
            j = len(edges)
            edges.append((base + p, base + (p + 1) % m, graph.dartLength(walk[p])))
            origin.append(walk[p] >> 1)
            brickOf.append(brick.index)
            walkDart.append(2 * j)
        brickDart = {}
        for e in sorted(interior):
            u, v, length = graph.edges[e]
            tail = base + cornerOf[2 * e] if 2 * e in cornerOf else innerId[u]
            head = base + cornerOf[2 * e + 1] if 2 * e + 1 in cornerOf else innerId[v]
            j = len(edges)
            edges.append((tail, head, length))
            origin.append(e)
            brickOf.append(brick.index)
            brickDart[2 * e], brickDart[2 * e + 1] = 2 * j, 2 * j + 1
        for p in range(m):
            brickRotations.append([walkDart[p - 1] ^ 1] + [brickDart[d] for d in sectors[p]] + [walkDart[p]])
        for x in inner:
            brickRotations.append([brickDart[d] for d in rotation.rotation[x]])
        for p in brick.portals:
            pending.append((graph.tail(walk[p]), mortarDart[walk[p - 1] ^ 1], base + p, walkDart[p]))

    rotationList = mortarRotation + brickRotations
    for x, mortarBefore, copy, brickBefore in pending:
        q = len(edges)
        edges.append((x, copy, Fraction(0)))
        origin.append(None)
        brickOf.append(None)
        portalEdges.append(q)
        darts = rotationList[x]
        darts.insert(darts.index(mortarBefore) + 1, 2 * q)
        darts = rotationList[copy]
        darts.insert(darts.index(brickBefore) + 1, 2 * q + 1)

    connected = WeightedGraph(len(copyOf), edges)
    return PortalConnectedGraph(connected, RotationSystem(rotationList), tuple(copyOf), tuple(origin),
                                tuple(brickOf), tuple(portalEdges))


@dataclasses.dataclass
class SpannerResult:
    """ Every stage of a spanner construction together with its validator reports. """
    graph: WeightedGraph
    epsilon: Fraction
    theta: int
    outer: object
    strips: list
    mortar: object
    bricks: list
    portalConnected: PortalConnectedGraph
    edges: tuple
    length: Fraction
    reports: dict

    @property
    def passed(self):
        return all(report['passed'] for report in self.reports.values())

    def toDict(self):
        """ Returns the checkpoint of every stage.

        .. code-block:: text

            {
                "epsilon":"1/2",
                "theta":4,
                "outerLength":"6",
                "strips":[{"index":0, "x":1, "y":0, "south":[0], "north":[2], ...}],
                "mortar":{"edges":[0, 1, 2], "length":"5"},
                "bricks":[{"index":0, "boundary":[1, 4], "labels":"SN", "interior":[3], "portals":[1]}],
                "spanner":{"edges":[0, 1, 2, 3], "length":"6"},
                "reports":{"mortar":{"passed":True, ...}}
            }

        :rtype: dict

        """
        outer = self.outer
        strips = []
        for strip in self.strips:
            strips.append({'index': strip.index, 'x': outer.copyOf[strip.x], 'y': outer.copyOf[strip.y],
                           'south': outer.originalEdges(strip.south), 'north': outer.originalEdges(strip.north),
                           'southLength': strip.southLength, 'northLength': strip.northLength,
                           'columns': len(strip.columns), 'k': strip.k, 'supercolumnClass': strip.supercolumnClass,
                           'supercolumnLength': strip.supercolumnLength()})
        bricks = [{'index': b.index, 'strip': b.strip, 'boundary': list(b.boundary), 'labels': ''.join(b.labels),
                   'interior': list(b.interior), 'portals': b.portalVertices(self.graph)} for b in self.bricks]
        return toJsonable({
            'epsilon': self.epsilon,
            'theta': self.theta,
            'tree': list(outer.treeEdges),
            'outerLength': outer.outerLength,
            'strips': strips,
            'mortar': {'edges': list(self.mortar.edges), 'length': self.mortar.length},
            'bricks': bricks,
            'spanner': {'edges': list(self.edges), 'length': self.length},
            'reports': self.reports,
        })

    def toJson(self):
        return json.dumps(self.toDict(), indent=2)


class SpannerBuilder:
    """ Runs the spanner stages for one tree of a planar instance.

    :param instance: The instance, its rotation is computed when missing.
    :type instance: PcInstance
    :param epsilon: Slack in ``(0, 1]``.
    :type epsilon: Fraction
    :param theta: Portals per brick.
    :type theta: int
    :param maxTheta: Largest accepted theta, defaults to 8
    :type maxTheta: int, optional
    :param dwCap: Terminal cap of the per-brick Steiner computations, defaults to 10
    :type dwCap: int, optional
    :param debug: Debug logging control, defaults to False
    :type debug: bool, optional
    :param loggingLevel: One of 'off', 'error' or 'full' to control file logging, defaults to 'off'
    :type loggingLevel: str, optional
    :raises BudgetExceededError: When theta is beyond the budget.
    """
    def __init__(self, instance, epsilon, theta, maxTheta=8, dwCap=10, debug=False, loggingLevel='off'):
        self.logger = AppLogger.getLogger(__name__, debug, loggingLevel)
        self.instance = instance
        self.graph = instance.graph
        self.rotation = instance.rotation if instance.rotation is not None else planarRotation(instance.graph)
        self.epsilon = toRational(epsilon)
        if not (0 < self.epsilon <= 1):
            raise ValidationError("Epsilon must lie in (0, 1], got {}".format(self.epsilon))
        self.theta = _checkTheta(theta)
        if self.theta > maxTheta or self.theta > dwCap:
            estimate = 3 ** self.theta * self.graph.n
            raise BudgetExceededError("Theta {} exceeds the budget (max {}, Dreyfus-Wagner cap {}), "
                                      "estimated {} table updates per brick".format(
                                          self.theta, maxTheta, dwCap, estimate), estimate)
        self.dwCap = dwCap
        self.reports = {}

    def _embeddingReport(self, name, graph, rotation):
        report = checkEmbedding(graph, rotation)
        self.reports[name] = report
        if not report['passed']:
            self.logger.error("Could not keep the embedding planar after {}, reason: {}".format(
                name, report['violations']))

    def brickTrees(self, brick):
        """ Union of optimal Steiner trees inside ``brick`` for every set of at least two portals. """
        portals = sorted(set(brick.portalVertices(self.graph)))
        if len(portals) < 2:
            return set()
        dw = DreyfusWagner(self.graph, portals, brick.edges(), self.dwCap)
        found = set()
        for mask in range(1, 1 << len(dw.terminals)):
            if mask & (mask - 1) == 0:
                continue
            edges, _ = dw.tree(mask)
            if edges is None:
                self.logger.warning("Could not connect portals {} of brick {}, reason: disconnected".format(
                    mask, brick.index))
                continue
            found.update(edges)
        return found

    def build(self, treeEdges, terminals=()):
        """ Runs every stage and validates it.

        :param treeEdges: Edge ids of the tree to splice along.
        :type treeEdges: iterable
        :param terminals: Vertices that must lie on the tree.
        :type terminals: iterable, optional
        :rtype: SpannerResult
        """
        graph, epsilon = self.graph, self.epsilon
        outer = spliceOpen(graph, self.rotation, treeEdges, terminals)
        self._embeddingReport('splice', outer.graph, outer.rotation)
        treeLength = graph.totalLength(outer.treeEdges)
        self.reports['outerLength'] = {'passed': outer.outerLength == 2 * treeLength,
                                       'value': outer.outerLength, 'bound': 2 * treeLength}

        strips = decomposeStrips(outer, epsilon)
        for strip in strips:
            selectSupercolumns(outer, strip, epsilon)
        self.reports['strips'] = checkStripBoundaries(outer, strips, epsilon)
        self.reports['columns'] = checkColumns(strips, epsilon)
        self.reports['supercolumns'] = checkSupercolumns(outer, strips, epsilon)

        mortar = buildMortar(graph, outer, strips)
        self.reports['mortar'] = checkMortar(graph, outer, mortar, epsilon)
        sub, subRotation, _ = edgeSubgraph(graph, mortar.edges, self.rotation)
        self._embeddingReport('mortarEmbedding', sub, subRotation)

        bricks = enumerateBricks(graph, self.rotation, mortar, outer, strips)
        portalReports = []
        for brick in bricks:
            placePortals(brick, graph, self.theta)
            portalReports.append(checkPortals(brick, graph, self.theta))
        self.reports['portals'] = {'passed': all(r['passed'] for r in portalReports), 'bricks': portalReports}
        connected = buildPortalConnected(graph, self.rotation, mortar, bricks)
        self._embeddingReport('portalEmbedding', connected.graph, connected.rotation)
        self.reports['portalCopies'] = connected.checkCopies(mortar, bricks)

        spanner = set(mortar.edges)
        for brick in bricks:
            spanner.update(self.brickTrees(brick))
        edges = tuple(sorted(spanner))
        length = graph.totalLength(edges)
        self.reports['spanner'] = {'passed': length <= (1 + 2 ** (1 + self.theta)) * mortar.length,
                                   'value': length, 'bound': (1 + 2 ** (1 + self.theta)) * mortar.length,
                                   'outerBound': (1 + 2 ** (1 + self.theta)) * (3 / epsilon + epsilon) * outer.outerLength}
        self.logger.info("Spanner: {} strips, mortar {} edges, {} bricks, {} of {} edges kept".format(
            len(strips), len(mortar.edges), len(bricks), len(edges), graph.edgeCount))
        for name, report in self.reports.items():
            if not report['passed']:
                self.logger.error("Could not validate stage '{}', reason: {}".format(name, toJsonable(report)))
        return SpannerResult(graph, epsilon, self.theta, outer, strips, mortar, bricks, connected, edges, length,
                             self.reports)


def buildSpanner(instance, treeEdges, epsilon, theta, terminals=(), maxTheta=8, dwCap=10, debug=False,
                 loggingLevel='off'):
    """ Builds the spanner of ``instance`` around ``treeEdges``.

    :return: The spanner edges, their length, every stage and its reports.
    :rtype: SpannerResult
    """
    builder = SpannerBuilder(instance, epsilon, theta, maxTheta, dwCap, debug, loggingLevel)
    return builder.build(treeEdges, terminals)


def restrictInstance(instance, edgeIds):
    """ The instance on the same vertices with only ``edgeIds`` kept, and the map back.

    :return: ``(instance, originalIds)``
    :rtype: tuple
    """
    sub, subRotation, originalIds = edgeSubgraph(instance.graph, edgeIds, instance.rotation)
    return dataclasses.replace(instance, graph=sub, rotation=subRotation), originalIds

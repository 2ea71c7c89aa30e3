# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Prize-collecting instances, solutions and cost evaluation
'''

import dataclasses
import logging
from fractions import Fraction

from . import PCSteinerError
from .GRAPH import RotationSystem, WeightedGraph, ValidationError, connectivity, toRational

logger = logging.getLogger(__name__)

TREE = 'tree'
FOREST = 'forest'


class NotNormalizedError(PCSteinerError):
    """ Raised when an algorithm needs terminal-normalized input and did not get it. """


@dataclasses.dataclass(frozen=True)
class Pair:
    s: int
    t: int
    penalty: Fraction


@dataclasses.dataclass(frozen=True)
class PcInstance:
    """ A prize-collecting Steiner tree (``mode='tree'``) or forest (``mode='forest'``) instance.

    Tree instances carry a root and one penalty per vertex. Forest instances carry
    terminal pairs, each with its separation penalty.

    :param graph: The underlying graph.
    :type graph: WeightedGraph
    :param mode: ``'tree'`` or ``'forest'``.
    :type mode: str
    :param pairs: Terminal pairs (forest mode).
    :type pairs: tuple, optional
    :param root: Root vertex (tree mode, also kept as metadata on encoded instances).
    :type root: int, optional
    :param vertexPenalties: One penalty per vertex (tree mode).
    :type vertexPenalties: tuple, optional
    :param rotation: Combinatorial embedding, if known.
    :type rotation: RotationSystem, optional
    """
    graph: WeightedGraph
    mode: str
    pairs: tuple = ()
    root: int = None
    vertexPenalties: tuple = ()
    rotation: object = None
    normalized: bool = False
    vertexOrigin: tuple = None
    coords: tuple = None
    name: str = ''

    def __post_init__(self):
        n = self.graph.n
        if self.mode not in (TREE, FOREST):
            raise ValidationError("Unknown instance mode '{}'".format(self.mode))
        pairs = tuple(p if isinstance(p, Pair) else Pair(int(p[0]), int(p[1]), toRational(p[2])) for p in self.pairs)
        object.__setattr__(self, 'pairs', pairs)
        for index, pair in enumerate(pairs):
            if not (0 <= pair.s < n and 0 <= pair.t < n):
                raise ValidationError("Pair {} has an endpoint outside 0..{}".format(index, n - 1))
            if pair.s == pair.t:
                raise ValidationError("Pair {} has equal endpoints {}".format(index, pair.s))
            if pair.penalty < 0:
                raise ValidationError("Pair {} has negative penalty {}".format(index, pair.penalty))

        if self.mode == TREE:
            if self.root is None or not (0 <= self.root < n):
                raise ValidationError("Tree instance needs a root inside 0..{}, got {}".format(n - 1, self.root))
            penalties = tuple(toRational(p) for p in self.vertexPenalties) or tuple(Fraction(0) for _ in range(n))
            if len(penalties) != n:
                raise ValidationError("Expected {} vertex penalties, got {}".format(n, len(penalties)))
            for v, p in enumerate(penalties):
                if p < 0:
                    raise ValidationError("Vertex {} has negative penalty {}".format(v, p))
            object.__setattr__(self, 'vertexPenalties', penalties)
            if pairs:
                raise ValidationError("Tree instances do not take terminal pairs")
        elif self.vertexPenalties:
            raise ValidationError("Forest instances do not take vertex penalties")

        if self.vertexOrigin is None:
            object.__setattr__(self, 'vertexOrigin', tuple(range(n)))
        elif len(self.vertexOrigin) != n:
            raise ValidationError("Vertex origin map has {} entries for {} vertices".format(len(self.vertexOrigin), n))
        if self.rotation is not None and len(self.rotation.rotation) != n:
            raise ValidationError("Rotation covers {} vertices, graph has {}".format(len(self.rotation.rotation), n))
        if self.coords is not None:
            object.__setattr__(self, 'coords', tuple(tuple(c) for c in self.coords))

    @property
    def baseVertexCount(self):
        """ Number of leading vertices that are not normalization pendants. """
        count = 0
        while count < self.graph.n and self.vertexOrigin[count] == count:
            count += 1
        return count

    def penalty(self, v):
        return self.vertexPenalties[v]

    def penaltyTotal(self):
        if self.mode == TREE:
            return sum((p for v, p in enumerate(self.vertexPenalties) if v != self.root), Fraction(0))
        return sum((p.penalty for p in self.pairs), Fraction(0))

    def terminals(self):
        """ Vertices carrying a positive penalty (tree) or a positive pair (forest). """
        if self.mode == TREE:
            return tuple(v for v, p in enumerate(self.vertexPenalties) if p > 0 and v != self.root)
        return tuple(sorted(set(x for p in self.pairs if p.penalty > 0 for x in (p.s, p.t))))


def sameInstance(a, b):
    """ Compares the abstract instances (graph, terminals, penalties and embedding). """
    return (a.graph == b.graph and a.mode == b.mode and a.pairs == b.pairs
            and (a.root if a.mode == TREE else None) == (b.root if b.mode == TREE else None)
            and a.vertexPenalties == b.vertexPenalties and a.rotation == b.rotation)


@dataclasses.dataclass(frozen=True)
class SolutionForest:
    """ An edge set together with its evaluated length, penalty and cost. """
    edges: tuple
    length: Fraction
    penalty: Fraction

    @property
    def cost(self):
        return self.length + self.penalty

    def toDict(self):
        return {'edges': list(self.edges), 'length': str(self.length),
                'penalty': str(self.penalty), 'cost': str(self.cost)}


def evaluate(instance, edgeIds):
    """ Evaluates an edge set on an instance.

    Tree mode charges the penalty of every vertex not connected to the root,
    forest mode the penalty of every pair whose endpoints are disconnected.

    :param instance: The instance.
    :type instance: PcInstance
    :param edgeIds: Edge ids, duplicates are ignored.
    :type edgeIds: iterable
    :raises ValidationError: When an edge id is out of range.
    :rtype: SolutionForest
    """
    graph = instance.graph
    edges = sorted(set(edgeIds))
    for e in edges:
        if not (0 <= e < graph.edgeCount):
            raise ValidationError("Edge id {} outside 0..{}".format(e, graph.edgeCount - 1))
    uf = connectivity(graph, edges)
    if instance.mode == TREE:
        rootSet = uf[instance.root]
        penalty = sum((p for v, p in enumerate(instance.vertexPenalties) if uf[v] != rootSet), Fraction(0))
    else:
        penalty = sum((p.penalty for p in instance.pairs if uf[p.s] != uf[p.t]), Fraction(0))
    return SolutionForest(tuple(edges), graph.totalLength(edges), penalty)


def _withPendants(instance, attachTo):
    """ Appends one zero-length pendant per entry of ``attachTo`` and returns the new pieces. """
    graph = instance.graph
    n = graph.n
    edges = list(graph.edges)
    origin = list(instance.vertexOrigin)
    rotation = instance.rotation.toList() if instance.rotation is not None else None
    coords = list(instance.coords) if instance.coords is not None else None
    pendants = []
    for v in attachTo:
        w = n + len(pendants)
        e = len(edges)
        edges.append((v, w, Fraction(0)))
        origin.append(origin[v])
        if rotation is not None:
            rotation[v].append(2 * e)
            rotation.append([2 * e + 1])
        if coords is not None:
            coords.append(coords[v])
        pendants.append(w)
    return WeightedGraph(n + len(pendants), edges), pendants, tuple(origin), rotation, coords


def normalizeTerminals(instance):
    """ Makes every terminal a degree-1 vertex hosting exactly one pair endpoint.

    Tree instances are first encoded as forests: every penalized vertex ``v`` other
    than the root becomes the pair ``(v', r'_v)`` of two fresh pendants hung on ``v``
    and on the root. Original edges keep their ids; pendant edges are appended.

    :param instance: Instance to normalize.
    :type instance: PcInstance
    :return: A normalized forest instance with the same optimal cost.
    :rtype: PcInstance
    """
    if instance.normalized and instance.mode == FOREST:
        return instance

    if instance.mode == TREE:
        penalized = [v for v, p in enumerate(instance.vertexPenalties) if v != instance.root and p > 0]
        attach = []
        for v in penalized:
            attach.extend([v, instance.root])
        graph, pendants, origin, rotation, coords = _withPendants(instance, attach)
        pairs = tuple(Pair(pendants[2 * i], pendants[2 * i + 1], instance.vertexPenalties[v])
                      for i, v in enumerate(penalized))
        logger.debug("Encoded tree instance as {} pairs".format(len(pairs)))
        return PcInstance(graph, FOREST, pairs=pairs, root=instance.root,
                          rotation=RotationSystem(rotation) if rotation is not None else None,
                          normalized=True, vertexOrigin=origin, coords=coords, name=instance.name)

    hosted = {}
    for pair in instance.pairs:
        for x in (pair.s, pair.t):
            hosted[x] = hosted.get(x, 0) + 1
    attach = []
    for pair in instance.pairs:
        for x in (pair.s, pair.t):
            if instance.graph.degree(x) != 1 or hosted[x] > 1:
                attach.append(x)
    if not attach:
        return dataclasses.replace(instance, normalized=True)

    graph, pendants, origin, rotation, coords = _withPendants(instance, attach)
    pairs = []
    cursor = 0
    for pair in instance.pairs:
        ends = []
        for x in (pair.s, pair.t):
            if instance.graph.degree(x) != 1 or hosted[x] > 1:
                ends.append(pendants[cursor])
                cursor += 1
            else:
                ends.append(x)
        pairs.append(Pair(ends[0], ends[1], pair.penalty))
    logger.debug("Attached {} terminal pendants".format(len(pendants)))
    return PcInstance(graph, FOREST, pairs=tuple(pairs), root=instance.root,
                      rotation=RotationSystem(rotation) if rotation is not None else None,
                      normalized=True, vertexOrigin=origin, coords=coords, name=instance.name)


def baseEdges(encoded, edgeIds):
    """ Keeps the edge ids that exist in the instance before normalization. """
    baseCount = sum(1 for u, v, _ in encoded.graph.edges
                    if u < encoded.baseVertexCount and v < encoded.baseVertexCount)
    return tuple(sorted(e for e in set(edgeIds) if e < baseCount))


def toVertexForm(encoded):
    """ Decodes a tree instance that was encoded by :func:`normalizeTerminals`.

    :raises NotNormalizedError: When the instance does not carry a root.
    :rtype: PcInstance
    """
    if encoded.root is None:
        raise NotNormalizedError("Encoded instance carries no root")
    n = encoded.baseVertexCount
    edges = [(u, v, length) for u, v, length in encoded.graph.edges if u < n and v < n]
    penalties = [Fraction(0)] * n
    for pair in encoded.pairs:
        penalties[encoded.vertexOrigin[pair.s]] += pair.penalty
    rotation = None
    if encoded.rotation is not None:
        rotation = encoded.rotation.restrict(range(len(edges)))
        rotation = type(rotation)(rotation.rotation[:n])
    coords = encoded.coords[:n] if encoded.coords is not None else None
    return PcInstance(WeightedGraph(n, edges), TREE, root=encoded.root, vertexPenalties=tuple(penalties),
                      rotation=rotation, coords=coords, name=encoded.name)

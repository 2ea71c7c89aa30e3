# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
Seeded generators of planar prize-collecting instances
'''

import logging
import math
from fractions import Fraction

import numpy as np
from scipy.spatial import Delaunay

from .GRAPH import ValidationError, WeightedGraph, planarRotation, rotationFromCoordinates
from .INSTANCE import FOREST, TREE, PcInstance

logger = logging.getLogger(__name__)

GRID = 'grid'
DELAUNAY = 'delaunay'
SERIES_PARALLEL = 'series-parallel'
RING_CHORDS = 'ring-chords'

KINDS = (GRID, DELAUNAY, SERIES_PARALLEL, RING_CHORDS)


def _lengths(rng, count, lengthRange):
    low, high = lengthRange
    return [Fraction(int(x)) for x in rng.integers(low, high + 1, size=count)]


def gridGraph(rows, cols):
    """ Edges and coordinates of a ``rows x cols`` grid, vertices numbered row by row. """
    if rows < 1 or cols < 1:
        raise ValidationError("Grid needs at least one row and one column, got {}x{}".format(rows, cols))
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    coords = [(c, r) for r in range(rows) for c in range(cols)]
    return rows * cols, pairs, coords


def delaunayGraph(points, rng):
    """ Edges and coordinates of the Delaunay triangulation of random points. """
    if points < 3:
        raise ValidationError("Delaunay generator needs at least 3 points, got {}".format(points))
    xy = rng.random((points, 2))
    triangulation = Delaunay(xy)
    found = set()
    for simplex in triangulation.simplices:
        a, b, c = sorted(int(x) for x in simplex)
        found.update([(a, b), (a, c), (b, c)])
    coords = [(float(x), float(y)) for x, y in xy]
    return points, sorted(found), coords


def seriesParallelGraph(steps, rng):
    """ Two-terminal series-parallel graph grown from a single edge.

    Every step picks an edge and either subdivides it or adds a two-edge path
    between its endpoints, so the graph stays simple with treewidth at most 2.
    """
    pairs = [(0, 1)]
    n = 2
    for _ in range(steps):
        index = int(rng.integers(len(pairs)))
        u, v = pairs[index]
        w = n
        n += 1
        if rng.random() < 0.5:
            pairs[index] = (u, w)
            pairs.append((w, v))
        else:
            pairs.extend([(u, w), (w, v)])
    return n, pairs, None


def ringChordsGraph(size, chords, rng):
    """ Cycle on ``size`` vertices in convex position plus non-crossing chords. """
    if size < 3:
        raise ValidationError("Ring needs at least 3 vertices, got {}".format(size))
    pairs = [(v, (v + 1) % size) for v in range(size)]
    pairs = [(min(u, v), max(u, v)) for u, v in pairs]
    chosen = []

    def crosses(a, b, c, d):
        return (a < c < b < d) or (c < a < d < b)

    for _ in range(chords * 10):
        if len(chosen) >= chords:
            break
        a, b = sorted(int(x) for x in rng.choice(size, size=2, replace=False))
        if b - a < 2 or (a == 0 and b == size - 1):
            continue
        if (a, b) in chosen or any(crosses(a, b, c, d) for c, d in chosen):
            continue
        chosen.append((a, b))
    coords = [(math.cos(2 * math.pi * v / size), math.sin(2 * math.pi * v / size)) for v in range(size)]
    return size, pairs + chosen, coords


def generate(kind, seed=0, mode=FOREST, pairs=3, terminals=3, lengthRange=(1, 5), penaltyRange=(1, 10), **params):
    """ Builds a random planar instance with an embedding, deterministic per seed.

    Shape parameters by kind: ``grid`` takes ``rows`` and ``cols``, ``delaunay``
    takes ``points``, ``series-parallel`` takes ``steps`` and ``ring-chords``
    takes ``size`` and ``chords``.

    :param kind: One of ``grid``, ``delaunay``, ``series-parallel`` or ``ring-chords``.
    :type kind: str
    :param seed: Seed of the numpy generator, defaults to 0
    :type seed: int, optional
    :param mode: ``'forest'`` draws ``pairs`` terminal pairs, ``'tree'`` draws
        ``terminals`` penalized vertices and a root, defaults to ``'forest'``
    :type mode: str, optional
    :param lengthRange: Inclusive integer range of edge lengths, defaults to (1, 5)
    :type lengthRange: tuple, optional
    :param penaltyRange: Inclusive integer range of penalties, defaults to (1, 10)
    :type penaltyRange: tuple, optional
    :raises ValidationError: On an unknown kind or unusable parameters.
    :rtype: PcInstance
    """
    rng = np.random.default_rng(seed)
    if kind == GRID:
        n, pairList, coords = gridGraph(int(params.get('rows', 3)), int(params.get('cols', 3)))
    elif kind == DELAUNAY:
        n, pairList, coords = delaunayGraph(int(params.get('points', 8)), rng)
    elif kind == SERIES_PARALLEL:
        n, pairList, coords = seriesParallelGraph(int(params.get('steps', 6)), rng)
    elif kind == RING_CHORDS:
        n, pairList, coords = ringChordsGraph(int(params.get('size', 8)), int(params.get('chords', 3)), rng)
    else:
        raise ValidationError("Unknown generator kind '{}', expected one of {}".format(kind, ', '.join(KINDS)))

    lengths = _lengths(rng, len(pairList), lengthRange)
    graph = WeightedGraph(n, [(u, v, length) for (u, v), length in zip(pairList, lengths)])
    rotation = rotationFromCoordinates(graph, coords) if coords is not None else planarRotation(graph)
    low, high = penaltyRange
    name = '{}-{}'.format(kind, seed)

    if mode == TREE:
        root = int(rng.integers(n))
        others = [v for v in range(n) if v != root]
        count = min(terminals, len(others))
        chosen = rng.choice(others, size=count, replace=False) if count else []
        penalties = [Fraction(0)] * n
        for v in chosen:
            penalties[int(v)] = Fraction(int(rng.integers(low, high + 1)))
        instance = PcInstance(graph, TREE, root=root, vertexPenalties=tuple(penalties), rotation=rotation,
                              coords=coords, name=name)
    elif mode == FOREST:
        drawn = []
        for _ in range(pairs):
            s, t = (int(x) for x in rng.choice(n, size=2, replace=False))
            drawn.append((s, t, Fraction(int(rng.integers(low, high + 1)))))
        instance = PcInstance(graph, FOREST, pairs=tuple(drawn), rotation=rotation, coords=coords, name=name)
    else:
        raise ValidationError("Unknown instance mode '{}'".format(mode))
    logger.debug("Generated {} with {} vertices and {} edges".format(name, n, graph.edgeCount))
    return instance

# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

'''
SVG drawings of spanner stages
'''

import logging

import networkx as nx

logger = logging.getLogger(__name__)

LAYERS = ('graph', 'tree', 'north', 'mortar', 'spanner', 'portals')

_styles = {
    'graph': {'color': '0.8', 'linewidth': 0.8},
    'spanner': {'color': 'tab:green', 'linewidth': 1.6},
    'mortar': {'color': 'tab:blue', 'linewidth': 2.2},
    'north': {'color': 'tab:orange', 'linewidth': 2.6},
    'tree': {'color': 'black', 'linewidth': 3.0},
}


def layout(instance):
    """ Vertex positions: the instance coordinates, else a planar layout, else a seeded spring layout. """
    if instance.coords is not None:
        return {v: (float(x), float(y)) for v, (x, y) in enumerate(instance.coords)}
    simple = nx.Graph()
    simple.add_nodes_from(range(instance.graph.n))
    simple.add_edges_from((u, v) for u, v, _ in instance.graph.edges if u != v)
    try:
        return nx.planar_layout(simple)
    except nx.NetworkXException:
        return nx.spring_layout(simple, seed=0)


def stageLayers(result):
    """ Edge ids per layer of a spanner run.

    :param result: A finished spanner construction.
    :type result: SpannerResult
    :rtype: dict
    """
    return {
        'graph': list(range(result.graph.edgeCount)),
        'spanner': list(result.edges),
        'mortar': list(result.mortar.edges),
        'north': list(result.mortar.northEdges),
        'tree': list(result.mortar.treeEdges),
    }


def drawStages(instance, result, path, layers=LAYERS):
    """ Writes an SVG of the chosen layers of a spanner run.

    :param instance: The instance the spanner was built for.
    :type instance: PcInstance
    :param result: The spanner run.
    :type result: SpannerResult
    :param path: Output file.
    :type path: str
    :param layers: Layers to draw, bottom first, defaults to every layer
    :type layers: tuple, optional
    """
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    positions = layout(instance)
    edges = stageLayers(result)
    fig = plt.figure(figsize=(7, 7))
    ax = fig.gca()
    for layer in layers:
        if layer not in edges:
            continue
        for e in edges[layer]:
            u, v, _ = instance.graph.edges[e]
            (x1, y1), (x2, y2) = positions[u], positions[v]
            ax.plot([x1, x2], [y1, y2], **_styles[layer])
    if 'portals' in layers:
        portals = sorted(set(x for brick in result.bricks for x in brick.portalVertices(result.graph)))
        if portals:
            ax.scatter([positions[x][0] for x in portals], [positions[x][1] for x in portals], s=40, c='tab:red',
                       zorder=4, label='portals')
            ax.legend()
    terminals = instance.terminals()
    if terminals:
        ax.scatter([positions[x][0] for x in terminals], [positions[x][1] for x in terminals], s=28, marker='s',
                   c='tab:purple', zorder=5)
    ax.set_aspect('equal')
    ax.set_axis_off()
    fig.savefig(path, format='svg')
    plt.close(fig)
    logger.debug("Wrote stage drawing {}".format(path))

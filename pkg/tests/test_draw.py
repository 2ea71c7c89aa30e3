# Copyright (c) 2026 PCSteiner contributors
# SPDX-License-Identifier: MIT License

import pytest

from PCSteiner.Planar.DRAW import drawStages, layout, stageLayers
from PCSteiner.Planar.SPANNER import buildSpanner


@pytest.fixture
def result(loopGadget):
    return buildSpanner(loopGadget, (0, 1), 1, 2)


def test_stage_layers(result):
    layers = stageLayers(result)
    assert layers['tree'] == [0, 1]
    assert layers['north'] == [2]
    assert layers['spanner'] == [0, 1, 2]


def test_layout_covers_every_vertex(loopGadget):
    assert sorted(layout(loopGadget)) == [0, 1, 2]


def test_draw_svg(loopGadget, result, tmp_path):
    pytest.importorskip('matplotlib')
    path = tmp_path / "stages.svg"
    drawStages(loopGadget, result, str(path))
    assert "<svg" in path.read_text()

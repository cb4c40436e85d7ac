import xml.etree.ElementTree as ET

from greedyspan.generators import GeneratorSpec, generate
from greedyspan.geometry import PointSet
from greedyspan.graph import SpannerGraph
from greedyspan.greedy import greedy_original
from greedyspan.svg import render_svg


def _parse(doc):
    return ET.fromstring(doc)


def test_empty_canvas_is_valid():
    doc = render_svg(PointSet([]))
    root = _parse(doc)
    assert root.tag.endswith("svg")
    assert len(list(root)) == 0


def test_two_points_one_edge():
    pts = PointSet([(0, 0), (3, 4)])
    g = SpannerGraph(pts)
    g.add_edge(0, 1)
    root = _parse(render_svg(pts, g))
    lines = root.findall(".//{http://www.w3.org/2000/svg}line")
    circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
    assert len(lines) == 1
    assert len(circles) == 2


def test_segment_count_matches_edges():
    pts = generate(GeneratorSpec("uniform", 100, 6))
    g = greedy_original(pts, 2.0)
    root = _parse(render_svg(pts, g))
    lines = root.findall(".//{http://www.w3.org/2000/svg}line")
    circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
    assert len(lines) == g.edge_count
    assert len(circles) == 100


def test_deterministic_output():
    pts = generate(GeneratorSpec("uniform", 40, 2))
    g = greedy_original(pts, 2.0)
    assert render_svg(pts, g) == render_svg(pts, g)


def test_viewbox_has_margin():
    pts = PointSet([(0, 0), (10, 10)])
    root = _parse(render_svg(pts))
    x, y, w, h = map(float, root.get("viewBox").split())
    assert x < 0 and y < 0
    assert w > 10 and h > 10

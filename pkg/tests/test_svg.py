import xml.etree.ElementTree as ET

import numpy as np
import pytest

from sparsespectra.errors import ConfigError
from sparsespectra.esd import ESD
from sparsespectra.reports import write_eigenvalues_csv
from sparsespectra.svgplot import FigureSpec, parse_figure_spec, render_scatter_svg

SVG_NS = "{http://www.w3.org/2000/svg}"


def _write_csv(tmp_path, points, name="esd.csv"):
    path = tmp_path / name
    write_eigenvalues_csv(ESD.from_points(points), path)
    return str(path)


def _markers(svg_text):
    root = ET.fromstring(svg_text)
    return [el for el in root.iter(f"{SVG_NS}circle") if el.get("class") == "pt"]


def _refs(svg_text):
    root = ET.fromstring(svg_text)
    return [el for el in root.iter(f"{SVG_NS}circle") if el.get("class") == "ref"]


class TestRender:
    def test_one_marker_per_point(self, tmp_path):
        src = _write_csv(tmp_path, [0.25 + 0.5j])
        svg = render_scatter_svg(FigureSpec(source=src, overlay=False))
        assert len(_markers(svg)) == 1
        assert len(_refs(svg)) == 0

    def test_overlay_single_reference_circle(self, tmp_path):
        src = _write_csv(tmp_path, [0.0, 1.0 + 0.5j])
        svg = render_scatter_svg(FigureSpec(source=src, overlay=True))
        refs = _refs(svg)
        assert len(refs) == 1
        # Radius 1.0 in data coords: inner span (640 - 2*40) over [-1.5, 1.5].
        assert float(refs[0].get("r")) == pytest.approx(560.0 / 3.0, abs=1e-3)

    def test_marker_count_large(self, tmp_path, rng):
        pts = rng.standard_normal(300) + 1j * rng.standard_normal(300)
        src = _write_csv(tmp_path, pts)
        svg = render_scatter_svg(FigureSpec(source=src))
        assert len(_markers(svg)) == 300

    def test_byte_identical_reruns(self, tmp_path, rng):
        pts = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        src = _write_csv(tmp_path, pts)
        spec = FigureSpec(source=src, title="spectrum <demo> & co")
        assert render_scatter_svg(spec) == render_scatter_svg(spec)

    def test_valid_svg_document(self, tmp_path):
        src = _write_csv(tmp_path, [0.1 - 0.2j])
        svg = render_scatter_svg(FigureSpec(source=src, title="a<b>&c"))
        root = ET.fromstring(svg)
        assert root.tag == f"{SVG_NS}svg"
        assert root.get("version") == "1.1"

    def test_missing_source(self):
        with pytest.raises(ConfigError):
            render_scatter_svg(FigureSpec(source="/nonexistent/esd.csv"))

    def test_malformed_csv(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("not,a header\n")
        with pytest.raises(ConfigError):
            render_scatter_svg(FigureSpec(source=str(path)))

    def test_bad_bounds(self):
        with pytest.raises(ConfigError):
            FigureSpec(source="x.csv", re_min=1.0, re_max=-1.0)


class TestFigureSpecFile:
    def test_parse_full_spec(self):
        spec = parse_figure_spec(
            "source = a.csv\noutput = a.svg\nre_min = -2\nre_max = 2\n"
            "im_min = -2\nim_max = 2\nmarker_size = 1.5\noverlay = false\n"
            "title = demo plot\n"
        )
        assert spec.source == "a.csv"
        assert spec.output == "a.svg"
        assert spec.re_max == 2.0
        assert spec.marker_size == 1.5
        assert spec.overlay is False
        assert spec.title == "demo plot"

    def test_missing_source(self):
        with pytest.raises(ConfigError):
            parse_figure_spec("output = a.svg\n")

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            parse_figure_spec("source = a.csv\nzoom = 2\n")
        assert exc.value.line == 2


@pytest.mark.slow
def test_figure_scale_disk_regression(bernoulli_esd_2000, tmp_path):
    # 2000-point sparse Bernoulli cloud: at most 2% of markers outside
    # radius 1.1, and the rendered figure carries one marker per point.
    pts = bernoulli_esd_2000
    outside = np.count_nonzero(np.abs(pts) > 1.1)
    assert outside <= 0.02 * pts.size
    src = _write_csv(tmp_path, pts, "big.csv")
    svg = render_scatter_svg(FigureSpec(source=src, overlay=True))
    assert len(_markers(svg)) == 2000
    assert len(_refs(svg)) == 1

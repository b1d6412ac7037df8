from fractions import Fraction

import pytest

from realterm.errors import NotSmooth
from realterm.numeric_oracle import (
    GridConfig, match_components, projective_curve_components, region_arcs_numeric,
    sample_link, write_off,
)

CFG = GridConfig(resolution=32)


def test_config_validation():
    with pytest.raises(ValueError):
        GridConfig(resolution=8)
    with pytest.raises(ValueError):
        GridConfig(eps=Fraction(0))


@pytest.mark.parametrize("text, chis", [
    ("x", [2]),
    ("x^2 + y^2 + z^2 + t^2", []),
    ("x^2 + y^2 + z^2 - t^2", [2, 2]),
    ("x^2 + y^2 - z^2 - t^2", [0]),
])
def test_quadric_links(P, text, chis):
    assert sample_link(P(text), CFG).chis == chis


def test_weighted_sphere(P):
    # x^2 + yzt - (y^4 + z^4 + t^4): one component of genus 3
    link = sample_link(P("x^2 + y*z*t - y^4 - z^4 - t^4"),
                       GridConfig(resolution=48, weights=(3, 2, 2, 2)))
    assert link.chis == [-4]


def test_labels_are_deterministic(P):
    F = P("x^2 - y^2 + z^3 - z*t^2")
    a, b = sample_link(F, CFG), sample_link(F, CFG)
    assert a.chis == b.chis
    assert [c.representative for c in a.components] == [c.representative for c in b.components]


def test_match_components(P):
    link = sample_link(P("x^2 + y^2 + z^2 - t^2"), CFG)
    assert match_components(link, (1, 1, 1, -1)) == {"fixed": [], "swapped": [(0, 1)]}
    assert match_components(link, (-1, -1, -1, 1))["fixed"] == [0, 1]


def test_projective_curve(P):
    assert projective_curve_components(P("y^3 + z^3 + t^3 + y*z*t")) == 1
    assert projective_curve_components(P("(y - 2*t)*(y^2 + z^2 - t^2)")) == 2
    with pytest.raises(NotSmooth):
        projective_curve_components(P("y*z*t"))


def test_region_arcs(P):
    assert region_arcs_numeric(P("z*t*(z - t)*(z + t)")) == 4


def test_write_off(P, tmp_path):
    link = sample_link(P("x^2 + y^2 + z^2 - t^2"), CFG)
    path = tmp_path / "m.off"
    write_off(link, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "4OFF"
    nv, nf, _ = map(int, lines[1].split())
    assert nv == len(link.points) and len(lines) == 2 + nv + nf

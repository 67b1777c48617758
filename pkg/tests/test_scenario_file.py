import math
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from phasefilter import optics
from phasefilter import scenarios as scn
from phasefilter.scenario_file import ScenarioParseError, parse_scenario, print_scenario, read_scenario

BENCHES = os.path.join(os.path.dirname(__file__), os.pardir, "benches")

pos = hst.floats(0.1, 50.0, allow_nan=False)
real = hst.floats(-20.0, 20.0, allow_nan=False)

sources = hst.one_of(
    hst.builds(lambda q, dl: scn.Source("gaussian", {"q_i": q, "delta": dl}), hst.one_of(pos, hst.just(math.inf)), real),
    hst.builds(lambda d, q: scn.Source("cat", {"d": d, "q_f": q}), hst.floats(0, 20), pos),
    hst.builds(
        lambda K, p0, d, q: scn.Source("lens_output", {"K": K, "p0": p0, "d": d, "q_f": q}),
        hst.one_of(pos, hst.just(math.inf)), real, hst.floats(0, 20), pos,
    ),
)
elements = hst.one_of(
    hst.builds(lambda t: optics.Element("free_space", {"tau": t}), real),
    hst.builds(lambda k: optics.Element("lens", {"K": k}), pos),
    hst.builds(lambda p: optics.Element("tilt", {"p0": p}), real),
    hst.builds(lambda q, c: optics.Element("detector_filter", {"q_d": q, "center": c}), pos, real),
    hst.builds(
        lambda r, c, w: optics.Element("filter", {"representation": r, "center": c, "width": w}),
        hst.sampled_from(["position", "momentum"]), real, pos,
    ),
)
specs = hst.builds(
    lambda src, slits, els, planes, n, ext, out: scn.ScenarioSpec(
        source=src, slits=slits, elements=tuple(els), planes=tuple(sorted(planes)),
        grid=scn.GridSpec(n, ext), output=scn.OutputSpec(out),
    ),
    sources,
    hst.none() | hst.tuples(hst.floats(0, 20), pos),
    hst.lists(elements, max_size=4),
    hst.sets(hst.floats(0, 30, allow_nan=False), min_size=1, max_size=4),
    hst.integers(2, 2048).map(lambda k: 2 * k),
    pos,
    hst.none() | hst.sampled_from(["out", "results/run1"]),
)


@settings(max_examples=200, deadline=None)
@given(specs)
def test_print_parse_round_trip(spec):
    text = print_scenario(spec)
    assert parse_scenario(text) == spec
    assert print_scenario(parse_scenario(text)) == text


def test_minimal_file_gets_defaults():
    spec = parse_scenario("[source]\nkind = gaussian\n[slits]\nd = 4\nq_f = 1\n[planes]\n0 5\n")
    assert spec == scn.double_slit_spec()


def test_bench_files_match_builders():
    assert read_scenario(os.path.join(BENCHES, "double_slit.txt")) == scn.double_slit_spec()
    assert read_scenario(os.path.join(BENCHES, "which_path.txt")) == scn.detector_filter_spec(2.4)
    assert read_scenario(os.path.join(BENCHES, "delayed_choice.txt")) == scn.delayed_choice_spec()


def test_comments_and_blank_lines():
    text = "# header\n\n[source]   # beam\nkind = cat  # two lobes\nd = 3\n\nq_f = 0.5\n"
    spec = parse_scenario(text)
    assert spec.source.params == {"d": 3.0, "q_f": 0.5}


@pytest.mark.parametrize(
    "text, line",
    [
        ("[source]\nkind = cat\nd = 4\nq_f = -1\n", 4),
        ("[source]\nkind = cat\nd = 4\nq_f = 1\n[source]\nkind = cat\n", 5),
        ("[source]\nkind = gaussian\nwidth = 3\n", 3),
        ("[source]\nkind = gaussian\n[grid]\nn = 1001\n", 4),
        ("[source]\nkind = gaussian\n[grid]\nextent = nan\n", 4),
        ("[source]\nkind = laser\n", 2),
        ("[source]\nkind = gaussian\n[elements]\nfree_space tau=1\nmirror\n", 5),
        ("[source]\nkind = gaussian\n[elements]\nlens K=0\n", 4),
        ("[source]\nkind = gaussian\n[elements]\nfilter representation=energy center=0 width=1\n", 4),
        ("[source]\nkind = gaussian\n[elements]\nfree_space tau=1 tau=2\n", 4),
        ("[source]\nkind = gaussian\n[planes]\n5 0\n", 3),
        ("[source]\nkind = gaussian\n[planes]\n0 x\n", 4),
        ("[source]\nkind = gaussian\n[bogus]\n", 3),
        ("n = 4\n[source]\nkind = gaussian\n", 1),
        ("[source]\nkind = gaussian\n[output]\nformats = png\n", 4),
        ("[source]\nkind = gaussian\n[slits]\nd = 4\n", 3),
        ("[source\nkind = gaussian\n", 1),
        ("[source]\nq_i = 3\nkind = gaussian\n", 2),
    ],
)
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")


def test_missing_source():
    with pytest.raises(ScenarioParseError, match="missing"):
        parse_scenario("[planes]\n0\n")


def test_negative_beam_width_rejected_even_if_infinite():
    with pytest.raises(ScenarioParseError):
        parse_scenario("[source]\nkind = gaussian\nq_i = -inf\n")

import numpy as np
import pytest

from analyzer.consistency import analyze
from corpus.adaptive_bypass import FRAME_BYTES, MARKER, app_adaptive_bypass
from corpus.motion_detection import app_motion_detection, motion_frame
from corpus.predistortion import (
    SAMPLE_BYTES,
    app_dynamic_predistortion,
    branch_coefficients,
    control_schedule,
)
from model.graph import build_graph
from runtime.executor import instantiate, run
from runtime.interpreter import interpret


def small_apps():
    return [
        app_motion_detection(frame_w=12, frame_h=10, n_frames=4),
        app_dynamic_predistortion(n_branches=3, taps=4, block=8, n_blocks=6),
        app_adaptive_bypass(n_frames=6),
    ]


def run_app(app, **options):
    return run(instantiate(app.graph, config=app.config(**options)))


@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_interpreter_matches_the_scalar_oracle(app) -> None:
    assert interpret(app.graph, config=app.config()).sink_digests == app.oracle_digests()


@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_runtime_matches_the_golden_digests(app) -> None:
    assert run_app(app).sink_digests == app.golden_digests()


@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_analysis_facts(app) -> None:
    report = analyze(app.graph)
    assert report.consistent
    assert len(report.dpgs) == app.expected["dpgs"]
    for dpg in report.dpgs:
        assert len(dpg.dcs) == app.expected["M"]
        assert {dc.label: dc.membership() for dc in dpg.dcs} == app.expected["dcs"]
    if "beta" in app.expected:
        assert report.bounds.beta == app.expected["beta"]


@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_input_file_replays_the_source(app, tmp_path) -> None:
    graph_path, input_path, golden_path = app.write_files(tmp_path)
    assert input_path.read_bytes() == app.input_data
    graph = build_graph(app.file_document(str(input_path)))
    result = interpret(graph, config=app.config())
    assert result.sink_digests == app.golden_digests()


def test_still_frames_give_an_empty_motion_map() -> None:
    app = app_motion_detection(frame_w=8, frame_h=8, n_frames=3, pattern="zeros")
    assert run_app(app).outputs["snk"] == bytes(3 * 64)


def test_moving_frames_are_detected() -> None:
    app = app_motion_detection(frame_w=16, frame_h=16, n_frames=3)
    maps = np.frombuffer(run_app(app).outputs["snk"], dtype=np.uint8).reshape(3, 256)
    assert maps[1].any()


def test_each_map_depends_on_two_frames_only(tmp_path) -> None:
    app = app_motion_detection(frame_w=8, frame_h=8, n_frames=4)
    frames = [motion_frame(k, 8, 8) for k in range(4)]
    frames[1] = 255 - frames[1]
    path = tmp_path / "perturbed.bin"
    path.write_bytes(b"".join(f.tobytes() for f in frames))
    graph = build_graph(app.file_document(str(path)))

    original = interpret(app.graph, config=app.config()).outputs["snk"]
    perturbed = interpret(graph, config=app.config()).outputs["snk"]
    assert original[:64] == perturbed[:64]
    assert original[3 * 64:] == perturbed[3 * 64:]
    assert original[64:3 * 64] != perturbed[64:3 * 64]


def test_predistortion_impulse_response() -> None:
    taps, block = 4, 16
    app = app_dynamic_predistortion(n_branches=4, taps=taps, block=block, n_blocks=2,
                                    pattern=[[1, 1, 1, 1]], impulse=True)
    out = np.frombuffer(run_app(app).outputs["snk"], dtype=np.float32)
    assert out.size == 2 * block * 2
    coeffs = [branch_coefficients(k, taps) for k in range(1, 5)]
    expected_re = sum(h_re for h_re, _ in coeffs)
    expected_im = sum(h_im for _, h_im in coeffs)
    assert np.allclose(out[0:2 * taps:2], expected_re)
    assert np.allclose(out[1:2 * taps:2], expected_im)
    assert not out[2 * taps:].any()


def test_predistortion_single_branch() -> None:
    app = app_dynamic_predistortion(n_branches=4, taps=3, block=8, n_blocks=4,
                                    pattern=[[0, 1, 0, 0]])
    result = interpret(app.graph, config=app.config())
    assert result.firing_counts["fir2"] == 4
    assert result.firing_counts["fir1"] == result.firing_counts["fir3"] == 0
    assert result.sink_digests == app.oracle_digests()


def test_predistortion_schedule_keeps_two_branches_active() -> None:
    schedule = control_schedule(4, 50, seed=5)
    assert all(sum(bits) >= 2 for bits in schedule)
    assert control_schedule(4, 3, pattern=[[1, 0, 0, 0]]) == [(True, False, False, False)] * 3


def test_predistortion_port_tokens_follow_the_schedule() -> None:
    app = app_dynamic_predistortion(n_branches=3, taps=2, block=4, n_blocks=10, seed=2)
    report = run_app(app)
    schedule = control_schedule(3, 10, seed=2)
    for k in range(3):
        active = sum(bits[k] for bits in schedule)
        assert report.firing_counts[f"fir{k + 1}"] == active
        assert report.port_tokens.get(f"poly.b{k + 1}", 0) == 4 * active
    assert SAMPLE_BYTES * 4 * 10 == len(report.outputs["snk"])


def test_bypass_all_frames_skipped() -> None:
    app = app_adaptive_bypass(n_frames=3, pattern=[[0, 1]])
    out = np.frombuffer(run_app(app).outputs["snk"], dtype=np.float32)
    assert out.size * 4 == 3 * FRAME_BYTES
    assert (out == MARKER).all()


def test_bypass_all_frames_processed() -> None:
    app = app_adaptive_bypass(n_frames=3, pattern=[[1, 0]])
    report = run_app(app)
    assert report.firing_counts["layer1"] == 3
    assert report.sink_digests == app.oracle_digests()


def test_bypass_alternating_frames() -> None:
    app = app_adaptive_bypass(n_frames=4)
    report = run_app(app)
    assert report.firing_counts["layer2"] == 2
    frames = np.frombuffer(report.outputs["snk"], dtype=np.float32).reshape(4, -1)
    assert (frames[1] == MARKER).all() and (frames[3] == MARKER).all()
    assert not (frames[0] == MARKER).all()
    assert report.sink_digests == app.oracle_digests()


@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_jitter_keeps_the_digests(app) -> None:
    for seed in range(3):
        report = run_app(app, jitter_ms=0.2, jitter_seed=seed)
        assert report.sink_digests == app.golden_digests()


@pytest.mark.slow
@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_many_jittered_runs(app) -> None:
    for seed in range(100):
        report = run_app(app, jitter_ms=0.1, jitter_seed=seed)
        assert report.sink_digests == app.golden_digests()


@pytest.mark.parametrize("app", small_apps(), ids=lambda app: app.name)
def test_interpreter_occupancy_stays_within_the_analysed_bounds(app) -> None:
    beta = analyze(app.graph).bounds.beta
    assert set(beta) == {fifo.id for fifo in app.graph.fifos}
    peaks = interpret(app.graph, config=app.config()).max_occupancy
    assert {f: peaks[f] for f in beta if peaks[f] > beta[f]} == {}


def test_full_size_motion_detection_is_bit_exact() -> None:
    app = app_motion_detection(frame_w=64, frame_h=64, n_frames=16)
    report = run_app(app)
    assert report.firing_counts["src"] == 16
    assert report.sink_digests == app.oracle_digests() == app.golden_digests()


def test_predistortion_over_a_thousand_blocks() -> None:
    app = app_dynamic_predistortion(n_branches=3, taps=4, block=8, n_blocks=1000, seed=4)
    report = run_app(app, keep_outputs=False)
    assert report.firing_counts["src"] == 1000
    assert report.sink_digests == app.oracle_digests() == app.golden_digests()


def long_apps(firings):
    return [
        app_motion_detection(frame_w=8, frame_h=8, n_frames=firings),
        app_dynamic_predistortion(n_branches=2, taps=2, block=4, n_blocks=firings),
        app_adaptive_bypass(n_frames=firings),
    ]


@pytest.mark.slow
@pytest.mark.parametrize("app", long_apps(10_000), ids=lambda app: app.name)
def test_ten_thousand_source_firings(app) -> None:
    report = run_app(app, keep_outputs=False)
    assert report.firing_counts[app.source] == 10_000
    assert report.sink_digests == app.golden_digests()

"""Adaptive bypass: frames either run through a small matrix chain or skip it through a
bypass FIFO, in which case the classifier emits a constant marker frame."""

import numpy as np

from corpus.common import CorpusApp, GeneratorSource, actor, fifo, port
from runtime.behaviors import ActorBehavior

SIZE = 8
FRAME_BYTES = SIZE * SIZE * 4
MARKER = np.float32(-1.0)
ALTERNATE = [[1, 0], [0, 1]]
MODULE = "corpus.adaptive_bypass"


def input_frame(index, seed=0):
    rng = np.random.default_rng([seed, index])
    return rng.standard_normal((SIZE, SIZE)).astype(np.float32)


def layer_weights(layer, seed=0):
    rng = np.random.default_rng([seed, 100 + layer])
    return (0.3 * rng.standard_normal((SIZE, SIZE))).astype(np.float32)


def matmul(w, x):
    """w @ x accumulated one rank-1 term at a time, in k order."""
    out = np.zeros((w.shape[0], x.shape[1]), dtype=np.float32)
    for k in range(w.shape[1]):
        out = out + w[:, k:k + 1] * x[k:k + 1, :]
    return out


def relu(x):
    return np.maximum(x, np.float32(0))


class FrameSource(GeneratorSource):
    def generate(self, index):
        return input_frame(index, self.seed).tobytes()


class Select(ActorBehavior):
    """Dynamic head: forwards the frame to every active path."""

    def fire(self, ctx):
        frame = ctx.input_array("in")
        for port_id in ("net", "bypass"):
            if ctx.rates[port_id]:
                ctx.output_array(port_id)[:] = frame


class Layer(ActorBehavior):
    def init(self):
        self.weights = layer_weights(int(self.params["layer"]), self.seed)

    def fire(self, ctx):
        x = ctx.input_array("in", np.float32).reshape(SIZE, SIZE)
        ctx.output_array("out", np.float32)[:] = relu(matmul(self.weights, x)).ravel()


class Classify(ActorBehavior):
    """Dynamic tail: the last layer on processed frames, the marker otherwise."""

    def init(self):
        self.weights = layer_weights(3, self.seed)

    def fire(self, ctx):
        out = ctx.output_array("out", np.float32)
        if ctx.rates["net"]:
            h = ctx.input_array("net", np.float32).reshape(SIZE, SIZE)
            out[:] = matmul(self.weights, h).ravel()
        else:
            out[:] = MARKER


def _matmul_scalar(w, x):
    out = [[np.float32(0)] * SIZE for _ in range(SIZE)]
    for i in range(SIZE):
        for j in range(SIZE):
            acc = np.float32(0)
            for k in range(SIZE):
                acc = acc + w[i, k] * x[k, j]
            out[i][j] = acc
    return np.array(out, dtype=np.float32)


def bypass_reference(n_frames, seed=0, pattern=ALTERNATE):
    """Expected sink bytes: marker frames for bypassed inputs, the chain otherwise."""
    w1, w2, w3 = (layer_weights(layer, seed) for layer in (1, 2, 3))
    out = []
    for index in range(n_frames):
        process = bool(pattern[index % len(pattern)][0])
        if process:
            h = relu(_matmul_scalar(w1, input_frame(index, seed)))
            h = relu(_matmul_scalar(w2, h))
            out.append(_matmul_scalar(w3, h).tobytes())
        else:
            out.append(np.full((SIZE, SIZE), MARKER, dtype=np.float32).tobytes())
    return b"".join(out)


def bypass_document(seed, pattern=ALTERNATE):
    def stage(actor_id, layer):
        return actor(actor_id, "static", f"{MODULE}:Layer",
                     [port("in", direction="in"), port("out", direction="out")],
                     {"layer": layer, "seed": seed})

    return {
        "name": "adaptive_bypass",
        "actors": [
            actor("src", "static", f"{MODULE}:FrameSource", [port("out", direction="out")],
                  {"seed": seed}),
            actor("conf", "configuration", "control",
                  [port("c", "control_out", control_len=2)], {"pattern": pattern}),
            actor("select", "dynamic", f"{MODULE}:Select",
                  [port("c", "control_in"), port("in", direction="in"),
                   port("net", "drp", "out"), port("bypass", "drp", "out")]),
            stage("layer1", 1),
            stage("layer2", 2),
            actor("classify", "dynamic", f"{MODULE}:Classify",
                  [port("c", "control_in"), port("net", "drp", "in"),
                   port("bypass", "drp", "in"), port("out", direction="out")],
                  {"seed": seed}),
            actor("snk", "static", "sink", [port("in", direction="in")]),
        ],
        "fifos": [
            fifo("f_src", "src.out", "select.in", FRAME_BYTES),
            fifo("c_select", "conf.c", "select.c", 2),
            fifo("c_classify", "conf.c", "classify.c", 2),
            fifo("f_net", "select.net", "layer1.in", FRAME_BYTES),
            fifo("f_hidden", "layer1.out", "layer2.in", FRAME_BYTES),
            fifo("f_features", "layer2.out", "classify.net", FRAME_BYTES),
            fifo("f_bypass", "select.bypass", "classify.bypass", FRAME_BYTES),
            fifo("f_out", "classify.out", "snk.in", FRAME_BYTES),
        ],
        "control": [
            {"port": "conf.c", "drp": "select.net", "element": 1},
            {"port": "conf.c", "drp": "classify.net", "element": 1},
            {"port": "conf.c", "drp": "select.bypass", "element": 2},
            {"port": "conf.c", "drp": "classify.bypass", "element": 2},
        ],
    }


def app_adaptive_bypass(n_frames=16, seed=0, pattern=ALTERNATE):
    return CorpusApp(
        name="adaptive_bypass",
        document=bypass_document(seed, pattern),
        source="src",
        input_data=b"".join(input_frame(k, seed).tobytes() for k in range(n_frames)),
        firings=n_frames,
        expected={"dpgs": 1, "M": 2, "dcs": {"Z1": "{layer1, layer2}", "Z2": "{d}"}},
        oracle=lambda: {"snk": bypass_reference(n_frames, seed, pattern)},
    )

"""Dynamic predistortion: a memory-polynomial filter bank whose branches are switched
on and off per block by a configuration actor.

Samples are complex values stored as interleaved float32 (re, im) pairs, one sample
per token. All arithmetic is real float32 in a fixed operation order so the threaded
runtime, the interpreter and the scalar reference agree bit for bit.
"""

import numpy as np

from corpus.common import CorpusApp, GeneratorSource, actor, fifo, port
from runtime.behaviors import ActorBehavior, random_activation

SAMPLE_BYTES = 8
MODULE = "corpus.predistortion"


def signal_block(index, block, seed=0, impulse=False):
    """Interleaved samples of input block `index`."""
    if impulse:
        samples = np.zeros(2 * block, dtype=np.float32)
        if index == 0:
            samples[0] = 1.0
        return samples
    rng = np.random.default_rng([seed, index])
    return (0.5 * rng.standard_normal(2 * block)).astype(np.float32)


def branch_coefficients(branch, taps, seed=0):
    """(re, im) float32 taps of branch `branch` (1-based)."""
    rng = np.random.default_rng([seed, 1000 + branch])
    coeffs = rng.standard_normal((2, taps)) / taps
    return coeffs[0].astype(np.float32), coeffs[1].astype(np.float32)


def basis(re, im, order):
    """x * |x|^(order - 1), elementwise."""
    mag = np.sqrt(re * re + im * im)
    gain = np.ones_like(mag)
    for _ in range(order - 1):
        gain = gain * mag
    return re * gain, im * gain


class FirState:
    """Complex FIR over float32 parts; history carries across blocks."""

    def __init__(self, h_re, h_im):
        self.h_re = h_re
        self.h_im = h_im
        taps = len(h_re)
        self.hist_re = np.zeros(taps - 1, dtype=np.float32)
        self.hist_im = np.zeros(taps - 1, dtype=np.float32)

    def run(self, re, im):
        taps = len(self.h_re)
        buf_re = np.concatenate([self.hist_re, re])
        buf_im = np.concatenate([self.hist_im, im])
        n = len(re)
        y_re = np.zeros(n, dtype=np.float32)
        y_im = np.zeros(n, dtype=np.float32)
        for t in range(taps):
            x_re = buf_re[taps - 1 - t:taps - 1 - t + n]
            x_im = buf_im[taps - 1 - t:taps - 1 - t + n]
            y_re = y_re + (self.h_re[t] * x_re - self.h_im[t] * x_im)
            y_im = y_im + (self.h_re[t] * x_im + self.h_im[t] * x_re)
        if taps > 1:
            self.hist_re = buf_re[-(taps - 1):].copy()
            self.hist_im = buf_im[-(taps - 1):].copy()
        return y_re, y_im


def _split(samples):
    return samples[0::2], samples[1::2]


def _join(re, im, out):
    out[0::2] = re
    out[1::2] = im


class SignalSource(GeneratorSource):
    def generate(self, index):
        return signal_block(index, self.actor.outputs[0].atr, self.seed,
                            bool(self.params.get("impulse", False))).tobytes()


class PolySplit(ActorBehavior):
    """Dynamic splitter: active branch k receives the k-th basis signal."""

    def fire(self, ctx):
        re, im = _split(ctx.input_array("in", np.float32))
        for port_id, order in self.params["orders"].items():
            if not ctx.rates[port_id]:
                continue
            b_re, b_im = basis(re, im, int(order))
            _join(b_re, b_im, ctx.output_array(port_id, np.float32))


class BranchFir(ActorBehavior):
    def init(self):
        h_re, h_im = branch_coefficients(int(self.params["branch"]), int(self.params["taps"]),
                                         self.seed)
        self.state = FirState(h_re, h_im)

    def fire(self, ctx):
        y_re, y_im = self.state.run(*_split(ctx.input_array("in", np.float32)))
        _join(y_re, y_im, ctx.output_array("out", np.float32))


class BranchAdder(ActorBehavior):
    """Dynamic adder: sums the active branches in port order, starting from zero."""

    def fire(self, ctx):
        out = ctx.output_array("out", np.float32)
        total = np.zeros(out.size, dtype=np.float32)
        for port in self.actor.drps:
            if ctx.rates[port.id]:
                total = total + ctx.input_array(port.id, np.float32)
        out[:] = total


def control_schedule(n_branches, count, seed=0, min_active=2, pattern=None):
    """The activation tuples the configuration actor emits, in order."""
    if pattern:
        return [tuple(bool(b) for b in pattern[k % len(pattern)]) for k in range(count)]
    rng = np.random.default_rng(seed)
    return [random_activation(rng, n_branches, min_active) for _ in range(count)]


def predistortion_reference(n_branches, taps, block, n_blocks, seed=0, schedule=None,
                            impulse=False):
    """Expected sink bytes, one scalar multiply-add at a time."""
    f32 = np.float32
    coeffs = [branch_coefficients(k, taps, seed) for k in range(1, n_branches + 1)]
    history = [[(f32(0), f32(0))] * (taps - 1) for _ in range(n_branches)]
    out = []
    for index in range(n_blocks):
        samples = signal_block(index, block, seed, impulse)
        total = [(f32(0), f32(0))] * block
        for k in range(n_branches):
            if not schedule[index][k]:
                continue
            branch = []
            for i in range(block):
                re, im = samples[2 * i], samples[2 * i + 1]
                mag = np.sqrt(re * re + im * im)
                gain = f32(1)
                for _ in range(k):
                    gain = gain * mag
                branch.append((re * gain, im * gain))
            stream = history[k] + branch
            h_re, h_im = coeffs[k]
            for i in range(block):
                y_re, y_im = f32(0), f32(0)
                for t in range(taps):
                    x_re, x_im = stream[taps - 1 + i - t]
                    y_re = y_re + (h_re[t] * x_re - h_im[t] * x_im)
                    y_im = y_im + (h_re[t] * x_im + h_im[t] * x_re)
                total[i] = (total[i][0] + y_re, total[i][1] + y_im)
            history[k] = stream[len(stream) - (taps - 1):] if taps > 1 else []
        out.append(np.array(total, dtype=np.float32).ravel().tobytes())
    return b"".join(out)


def predistortion_document(n_branches, taps, block, seed, policy="random", pattern=None,
                           impulse=False):
    branches = range(1, n_branches + 1)
    conf_params = {"seed": seed}
    if pattern:
        conf_params["pattern"] = pattern
    else:
        conf_params.update(policy=policy, min_active=min(2, n_branches))
    actors = [
        actor("src", "static", f"{MODULE}:SignalSource", [port("out", direction="out",
                                                                atr=block)],
              {"seed": seed, "impulse": impulse}),
        actor("conf", "configuration", "control",
              [port("c", "control_out", control_len=n_branches)], conf_params),
        actor("poly", "dynamic", f"{MODULE}:PolySplit",
              [port("c", "control_in"), port("in", direction="in", atr=block)]
              + [port(f"b{k}", "drp", "out", atr=block) for k in branches],
              {"orders": {f"b{k}": k for k in branches}}),
    ]
    actors += [actor(f"fir{k}", "static", f"{MODULE}:BranchFir",
                     [port("in", direction="in", atr=block),
                      port("out", direction="out", atr=block)],
                     {"branch": k, "taps": taps, "seed": seed}) for k in branches]
    actors += [
        actor("add", "dynamic", f"{MODULE}:BranchAdder",
              [port("c", "control_in")]
              + [port(f"b{k}", "drp", "in", atr=block) for k in branches]
              + [port("out", direction="out", atr=block)]),
        actor("snk", "static", "sink", [port("in", direction="in", atr=block)]),
    ]
    fifos = [fifo("f_src", "src.out", "poly.in", SAMPLE_BYTES, rate=block),
             fifo("c_poly", "conf.c", "poly.c", n_branches),
             fifo("c_add", "conf.c", "add.c", n_branches)]
    for k in branches:
        fifos.append(fifo(f"f_in{k}", f"poly.b{k}", f"fir{k}.in", SAMPLE_BYTES, rate=block))
        fifos.append(fifo(f"f_out{k}", f"fir{k}.out", f"add.b{k}", SAMPLE_BYTES, rate=block))
    fifos.append(fifo("f_snk", "add.out", "snk.in", SAMPLE_BYTES, rate=block))
    control = []
    for k in branches:
        control.append({"port": "conf.c", "drp": f"poly.b{k}", "element": k})
        control.append({"port": "conf.c", "drp": f"add.b{k}", "element": k})
    return {"name": "predistortion", "actors": actors, "fifos": fifos, "control": control}


def app_dynamic_predistortion(n_branches=4, taps=10, block=256, seed=0, n_blocks=16,
                              pattern=None, impulse=False):
    schedule = control_schedule(n_branches, n_blocks, seed, min(2, n_branches), pattern)
    blocks = [signal_block(k, block, seed, impulse) for k in range(n_blocks)]
    return CorpusApp(
        name="predistortion",
        document=predistortion_document(n_branches, taps, block, seed, pattern=pattern,
                                        impulse=impulse),
        source="src",
        input_data=b"".join(b.tobytes() for b in blocks),
        firings=n_blocks,
        expected={"dpgs": 1, "M": n_branches,
                  "dcs": {f"Z{k}": f"{{fir{k}}}" for k in range(1, n_branches + 1)}},
        oracle=lambda: {"snk": predistortion_reference(n_branches, taps, block, n_blocks,
                                                       seed, schedule, impulse)},
    )

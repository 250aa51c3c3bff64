"""Motion detection: Gaussian smoothing, frame difference against the previous frame,
threshold and a 5-point median. The delayed Gauss -> Thres FIFO supplies the
previous frame; its single initial token is an all-zero frame."""

import numpy as np

from corpus.common import CorpusApp, GeneratorSource, actor, fifo, port
from runtime.behaviors import ActorBehavior

KERNEL = np.array([1, 4, 6, 4, 1], dtype=np.int32)
KERNEL_2D = np.outer(KERNEL, KERNEL)  # sums to 256
SKIP_ROWS = 2
THRESHOLD = 16

MODULE = "corpus.motion_detection"


def motion_frame(index, width, height, seed=0, shift=2, pattern="noise"):
    """Frame `index` of the test sequence: a seeded noise image moved `shift` pixels
    right per frame, or all zeros."""
    if pattern == "zeros":
        return np.zeros((height, width), dtype=np.uint8)
    base = np.random.default_rng(seed).integers(0, 256, (height, width), dtype=np.uint8)
    return np.roll(base, shift * index, axis=1)


def gauss(frame):
    """5x5 binomial blur; the two top and bottom rows pass through, columns clamp."""
    height, width = frame.shape
    out = frame.copy()
    if height <= 2 * SKIP_ROWS:
        return out
    padded = np.pad(frame.astype(np.int32), ((0, 0), (2, 2)), mode="edge")
    acc = np.zeros((height - 2 * SKIP_ROWS, width), dtype=np.int32)
    for dy in range(5):
        rows = padded[dy:dy + height - 2 * SKIP_ROWS]
        for dx in range(5):
            acc += KERNEL_2D[dy, dx] * rows[:, dx:dx + width]
    out[SKIP_ROWS:height - SKIP_ROWS] = ((acc + 128) >> 8).astype(np.uint8)
    return out


def threshold(current, previous, level=THRESHOLD):
    diff = np.abs(current.astype(np.int16) - previous.astype(np.int16))
    return np.where(diff > level, 255, 0).astype(np.uint8)


def median5(frame):
    """Median over the pixel and its four neighbours, edges replicated."""
    padded = np.pad(frame, 1, mode="edge")
    height, width = frame.shape
    stack = np.stack([
        padded[1:height + 1, 1:width + 1],
        padded[0:height, 1:width + 1],
        padded[2:height + 2, 1:width + 1],
        padded[1:height + 1, 0:width],
        padded[1:height + 1, 2:width + 2],
    ])
    return np.sort(stack, axis=0)[2]


class _FrameActor(ActorBehavior):
    def init(self):
        self.shape = (int(self.params["height"]), int(self.params["width"]))

    def frame(self, ctx, port_id):
        return ctx.input_array(port_id).reshape(self.shape)


class FrameSource(GeneratorSource):
    def generate(self, index):
        p = self.params
        return motion_frame(index, int(p["width"]), int(p["height"]), self.seed,
                            int(p.get("shift", 2)), p.get("pattern", "noise")).tobytes()


class GaussFilter(_FrameActor):
    def fire(self, ctx):
        ctx.output_array("out")[:] = gauss(self.frame(ctx, "in")).ravel()


class Threshold(_FrameActor):
    def fire(self, ctx):
        level = int(self.params.get("threshold", THRESHOLD))
        result = threshold(self.frame(ctx, "cur"), self.frame(ctx, "prev"), level)
        ctx.output_array("out")[:] = result.ravel()


class Median(_FrameActor):
    def fire(self, ctx):
        ctx.output_array("out")[:] = median5(self.frame(ctx, "in")).ravel()


# Scalar reference, one pixel at a time.

def _gauss_scalar(frame):
    height, width = len(frame), len(frame[0])
    out = [row[:] for row in frame]
    for y in range(SKIP_ROWS, height - SKIP_ROWS):
        for x in range(width):
            total = 0
            for dy in range(-2, 3):
                for dx in range(-2, 3):
                    col = min(max(x + dx, 0), width - 1)
                    total += int(KERNEL[dy + 2]) * int(KERNEL[dx + 2]) * frame[y + dy][col]
            out[y][x] = (total + 128) >> 8
    return out


def _median_scalar(frame):
    height, width = len(frame), len(frame[0])

    def at(y, x):
        return frame[min(max(y, 0), height - 1)][min(max(x, 0), width - 1)]

    return [[sorted([at(y, x), at(y - 1, x), at(y + 1, x), at(y, x - 1), at(y, x + 1)])[2]
             for x in range(width)] for y in range(height)]


def motion_reference(frames, level=THRESHOLD):
    """Expected motion maps for a frame sequence, computed with plain loops."""
    previous = None
    maps = []
    for frame in frames:
        smooth = _gauss_scalar(frame.astype(int).tolist())
        if previous is None:
            previous = [[0] * len(smooth[0]) for _ in smooth]
        diff = [[255 if abs(c - p) > level else 0 for c, p in zip(row, prev_row)]
                for row, prev_row in zip(smooth, previous)]
        maps.append(np.array(_median_scalar(diff), dtype=np.uint8))
        previous = smooth
    return maps


def motion_document(width, height, seed, shift=2, pattern="noise"):
    size = width * height
    dims = {"width": width, "height": height}
    return {
        "name": "motion_detection",
        "actors": [
            actor("src", "static", f"{MODULE}:FrameSource", [port("out", direction="out")],
                  {**dims, "seed": seed, "shift": shift, "pattern": pattern}),
            actor("gauss", "static", f"{MODULE}:GaussFilter",
                  [port("in", direction="in"), port("out", direction="out")], dims),
            actor("thres", "static", f"{MODULE}:Threshold",
                  [port("cur", direction="in"), port("prev", direction="in"),
                   port("out", direction="out")], {**dims, "threshold": THRESHOLD}),
            actor("med", "static", f"{MODULE}:Median",
                  [port("in", direction="in"), port("out", direction="out")], dims),
            actor("snk", "static", "sink", [port("in", direction="in")]),
        ],
        "fifos": [
            fifo("f_src", "src.out", "gauss.in", size),
            fifo("f_cur", "gauss.out", "thres.cur", size),
            fifo("f_prev", "gauss.out", "thres.prev", size, delay=1),
            fifo("f_mask", "thres.out", "med.in", size),
            fifo("f_out", "med.out", "snk.in", size),
        ],
        "control": [],
    }


def app_motion_detection(frame_w=64, frame_h=64, n_frames=16, seed=0, shift=2,
                         pattern="noise"):
    frames = [motion_frame(k, frame_w, frame_h, seed, shift, pattern) for k in range(n_frames)]
    return CorpusApp(
        name="motion_detection",
        document=motion_document(frame_w, frame_h, seed, shift, pattern),
        source="src",
        input_data=b"".join(f.tobytes() for f in frames),
        firings=n_frames,
        expected={"dpgs": 0, "dcs": {}, "beta": {"f_src": 1, "f_cur": 1, "f_prev": 2,
                                                 "f_mask": 1, "f_out": 1}},
        oracle=lambda: {"snk": b"".join(m.tobytes() for m in motion_reference(frames))},
    )

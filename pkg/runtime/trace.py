import threading


class TraceLog:
    """Per-transaction occupancy log: one `fifo_id op occupancy` line per event."""

    def __init__(self):
        self._lines = []
        self._lock = threading.Lock()

    def record(self, fifo_id, op, occupancy):
        with self._lock:
            self._lines.append((fifo_id, op, occupancy))

    @property
    def events(self):
        with self._lock:
            return list(self._lines)

    def max_occupancy(self):
        maxima = {}
        for fifo_id, _, occupancy in self.events:
            maxima[fifo_id] = max(maxima.get(fifo_id, 0), occupancy)
        return maxima

    def lines(self):
        return [f"{fifo_id} {op} {occupancy}" for fifo_id, op, occupancy in self.events]

    def write(self, path):
        with open(path, "w", encoding="utf-8") as f:
            for line in self.lines():
                f.write(line + "\n")

"""Versioned flat-text persistence for networks and trained models.

Floats are written as C99 hex literals (``float.hex()``), so a
save/load round trip is bit-exact for 64-bit values.  A network file
stores the layer table followed by every weight matrix (row-major) and
bias vector in layer order:

    scournet-network 1
    layers <n>
    layer <input_width> <output_width> <activation> <dropout_rate>
    ...
    W <k> <rows> <cols>
    <one line of hex floats per row>
    b <k> <len>
    <one line of hex floats>
    ...
    end

A trained-model file wraps a network section together with the fitted
standardizer (centers and scales for the seven features and the target).
"""

import numpy as np

from .errors import SchemaError
from .network import LayerSpec, NetworkParams, validate_layer_chain
from .preprocessing import Standardizer

NETWORK_MAGIC = "scournet-network"
MODEL_MAGIC = "scournet-model"
FORMAT_VERSION = 1


def _hex_row(values) -> str:
    return " ".join(float(v).hex() for v in values)


def _parse_hex_row(line: str, count: int, what: str) -> np.ndarray:
    parts = line.split()
    if len(parts) != count:
        raise SchemaError(f"{what}: expected {count} values, got {len(parts)}")
    try:
        return np.array([float.fromhex(p) for p in parts], dtype=np.float64)
    except ValueError as exc:
        raise SchemaError(f"{what}: bad float literal ({exc})") from None


def network_to_lines(specs, params: NetworkParams) -> list[str]:
    specs = validate_layer_chain(specs)
    params.check_matches(specs)
    lines = [f"{NETWORK_MAGIC} {FORMAT_VERSION}", f"layers {len(specs)}"]
    for spec in specs:
        lines.append(f"layer {spec.input_width} {spec.output_width} "
                     f"{spec.activation.value} {spec.dropout_rate!r}")
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        lines.append(f"W {k} {w.shape[0]} {w.shape[1]}")
        lines.extend(_hex_row(row) for row in w)
        lines.append(f"b {k} {b.shape[0]}")
        lines.append(_hex_row(b))
    lines.append("end")
    return lines


class _LineReader:
    def __init__(self, lines, label):
        self.lines = lines
        self.pos = 0
        self.label = label

    def next(self, expect_prefix: str | None = None) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].rstrip("\n")
            self.pos += 1
            if line.strip():
                if expect_prefix is not None and not line.startswith(expect_prefix):
                    raise SchemaError(f"{self.label}: expected {expect_prefix!r} "
                                      f"at line {self.pos}, got {line!r}")
                return line
        raise SchemaError(f"{self.label}: truncated file")


def network_from_reader(reader: "_LineReader") -> tuple[tuple, NetworkParams]:
    header = reader.next().split()
    if len(header) != 2 or header[0] != NETWORK_MAGIC:
        raise SchemaError(f"{reader.label}: not a {NETWORK_MAGIC} section: {header}")
    if int(header[1]) != FORMAT_VERSION:
        raise SchemaError(f"{reader.label}: unsupported format version {header[1]}")
    n_layers = int(reader.next("layers").split()[1])

    specs = []
    for _ in range(n_layers):
        _, fin, fout, act, rate = reader.next("layer").split()
        specs.append(LayerSpec(int(fin), int(fout), act, float(rate)))
    specs = validate_layer_chain(specs)

    weights, biases = [], []
    for k in range(n_layers):
        tag, idx, rows, cols = reader.next("W").split()
        if int(idx) != k:
            raise SchemaError(f"{reader.label}: weight block {idx}, expected {k}")
        rows, cols = int(rows), int(cols)
        w = np.empty((rows, cols), dtype=np.float64)
        for i in range(rows):
            w[i] = _parse_hex_row(reader.next(), cols, f"{reader.label}: W{k} row {i}")
        tag, idx, length = reader.next("b").split()
        if int(idx) != k:
            raise SchemaError(f"{reader.label}: bias block {idx}, expected {k}")
        b = _parse_hex_row(reader.next(), int(length), f"{reader.label}: b{k}")
        weights.append(w)
        biases.append(b)
    reader.next("end")

    params = NetworkParams(weights, biases)
    params.check_matches(specs)
    return specs, params


def save_network(path, specs, params: NetworkParams) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(network_to_lines(specs, params)) + "\n")


def load_network(path) -> tuple[tuple, NetworkParams]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    return network_from_reader(_LineReader(lines, str(path)))


def model_to_lines(specs, params: NetworkParams, standardizer: Standardizer) -> list[str]:
    if not standardizer.is_fitted:
        raise ValueError("cannot persist an unfitted standardizer")
    lines = [f"{MODEL_MAGIC} {FORMAT_VERSION}"]
    lines.extend(network_to_lines(specs, params))
    lines.append(f"standardizer {standardizer.feature_center_.shape[0]}")
    lines.append("feature_center " + _hex_row(standardizer.feature_center_))
    lines.append("feature_scale " + _hex_row(standardizer.feature_scale_))
    lines.append("target_center " + float(standardizer.target_center_).hex())
    lines.append("target_scale " + float(standardizer.target_scale_).hex())
    lines.append("end")
    return lines


def model_from_lines(lines, label: str = "model"):
    reader = _LineReader(lines, label)
    header = reader.next().split()
    if len(header) != 2 or header[0] != MODEL_MAGIC:
        raise SchemaError(f"{label}: not a {MODEL_MAGIC} file")
    if int(header[1]) != FORMAT_VERSION:
        raise SchemaError(f"{label}: unsupported format version {header[1]}")
    specs, params = network_from_reader(reader)

    width = int(reader.next("standardizer").split()[1])
    std = Standardizer()
    values = {}
    for key in ("feature_center", "feature_scale", "target_center", "target_scale"):
        line = reader.next(key)
        payload = line[len(key):].strip()
        count = width if key.startswith("feature") else 1
        values[key] = _parse_hex_row(payload, count, f"{label}: {key}")
    reader.next("end")
    std.feature_center_ = values["feature_center"]
    std.feature_scale_ = values["feature_scale"]
    std.target_center_ = float(values["target_center"][0])
    std.target_scale_ = float(values["target_scale"][0])
    return specs, params, std


def save_model(path, specs, params: NetworkParams, standardizer: Standardizer) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(model_to_lines(specs, params, standardizer)) + "\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    return model_from_lines(lines, str(path))

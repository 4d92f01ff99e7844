"""JSON and CSV serialization.

Frames are stored column by column: ``"columns"`` is a list of ``k``
vectors, each with ``n`` coordinates.
"""
import csv
import json

import numpy as np

from .atlas import FrameField
from .dilation import ComplementField, HolonomyReport
from .errors import BadShape
from .frames import DilationPair, Frame


def frame_to_dict(F):
    return {"n": F.n, "k": F.k, "columns": F.columns.tolist()}


def frame_from_dict(d):
    n, k = int(d["n"]), int(d["k"])
    cols = np.array(d["columns"], dtype=float).reshape(k, n)
    return Frame(cols.T)


def pair_to_dict(pair):
    out = frame_to_dict(pair.base)
    out["complement"] = frame_to_dict(pair.complement)
    out["residual"] = pair.residual
    return out


def pair_from_dict(d):
    return DilationPair(frame_from_dict(d), frame_from_dict(d["complement"]), float(d["residual"]))


def field_to_dict(field):
    return {
        "surface": field.surface,
        "fiberDim": field.fiber_dim,
        "frameSize": field.frame_size,
        "samples": [{"uv": [float(u), float(v)], "frame": frame_to_dict(F)} for (u, v), F in field.samples],
    }


def field_from_dict(d):
    samples = d["samples"]
    field = FrameField(d["surface"], [s["uv"] for s in samples], [frame_from_dict(s["frame"]) for s in samples])
    if field.fiber_dim != d["fiberDim"] or field.frame_size != d["frameSize"]:
        raise BadShape("fiberDim/frameSize do not match the samples")
    return field


def complement_field_to_dict(cf):
    out = field_to_dict(cf.base)
    out["method"] = cf.method
    out["maxStackResidual"] = cf.max_stack_residual
    for sample, C in zip(out["samples"], cf.complements):
        sample["complement"] = frame_to_dict(C)
    return out


def complement_field_from_dict(d):
    base = field_from_dict(d)
    comps = [frame_from_dict(s["complement"]) for s in d["samples"]]
    return ComplementField(base, comps, d["method"], float(d["maxStackResidual"]))


def holonomy_to_dict(report):
    return {
        "loopLength": report.loop_length,
        "holonomy": np.asarray(report.holonomy).tolist(),
        "residual": report.residual,
        "distance": report.distance,
        "det": report.det,
        "classification": report.classification,
        "spanResidual": report.span_residual,
        "stepStats": dict(report.step_stats),
    }


def holonomy_from_dict(d):
    return HolonomyReport(
        loop_length=int(d["loopLength"]),
        holonomy=np.array(d["holonomy"], dtype=float).reshape(len(d["holonomy"]), -1),
        residual=float(d["residual"]),
        distance=float(d["distance"]),
        det=float(d["det"]),
        classification=d["classification"],
        span_residual=float(d["spanResidual"]),
        step_stats=dict(d.get("stepStats", {})),
    )


def to_dict(obj):
    if isinstance(obj, Frame):
        return frame_to_dict(obj)
    if isinstance(obj, DilationPair):
        return pair_to_dict(obj)
    if isinstance(obj, ComplementField):
        return complement_field_to_dict(obj)
    if isinstance(obj, FrameField):
        return field_to_dict(obj)
    if isinstance(obj, HolonomyReport):
        return holonomy_to_dict(obj)
    if isinstance(obj, dict):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_dict(d):
    """Rebuild whichever object ``d`` describes; plain reports come back as dicts."""
    if "columns" in d:
        return pair_from_dict(d) if "complement" in d else frame_from_dict(d)
    if "samples" in d:
        if d["samples"] and "complement" in d["samples"][0]:
            return complement_field_from_dict(d)
        return field_from_dict(d)
    if "holonomy" in d and "classification" in d:
        return holonomy_from_dict(d)
    if "kind" in d:
        return d
    raise BadShape(f"unrecognized document with keys {sorted(d)}")


def dumps(obj):
    return json.dumps(to_dict(obj), indent=2, sort_keys=True) + "\n"


def write_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def read_json(path):
    with open(path) as fh:
        return from_dict(json.load(fh))


def write_field_csv(field, path):
    """One row per (sample, frame vector): ``u, v`` then the vector's coordinates."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v"] + [f"x{j + 1}" for j in range(field.fiber_dim)])
        for (u, v), F in field.samples:
            for col in F.columns:
                w.writerow([repr(float(u)), repr(float(v))] + [repr(float(c)) for c in col])


def read_field_csv(path, surface="csv"):
    """Inverse of :func:`write_field_csv`; consecutive rows with equal ``(u, v)`` form one frame."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["u", "v"]:
        raise BadShape("CSV must start with a 'u,v,...' header")
    points, frames, cols, current = [], [], [], None
    for row in rows[1:]:
        uv = (float(row[0]), float(row[1]))
        if current is not None and uv != current:
            points.append(current)
            frames.append(Frame.from_columns(cols))
            cols = []
        current = uv
        cols.append([float(c) for c in row[2:]])
    if current is None:
        raise BadShape("CSV holds no samples")
    points.append(current)
    frames.append(Frame.from_columns(cols))
    return FrameField(surface, points, frames)

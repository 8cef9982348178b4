"""Depth-map and image file I/O plus dataset directory layout.

Depth persists as 16-bit PNG with depth_m = raw / 256 and raw 0 meaning "no
reading" (the sparse-ground-truth convention), or as single-channel PFM for
float-exact interchange.  A dataset directory pairs NNNN_img.png with
NNNN_depth.png and carries a manifest.csv with the train/test split.
"""

import csv
import os
import re

import cv2
import numpy as np

from .depthmap import DepthMap
from .synthetic import SceneSpec, generate_scene

PNG16_SCALE = 256.0
PNG16_MAX_DEPTH = 65535 / PNG16_SCALE


def write_depth_png16(dmap, path):
    """16-bit PNG; valid depths round to raw = depth*256, invalid pixels to 0.

    Depths whose raw value would round to 0 or overflow 16 bits are rejected;
    quantized maps round-trip bit-exactly.
    """
    raw = np.rint(dmap.depth * PNG16_SCALE)
    raw[~dmap.valid] = 0.0
    if raw[dmap.valid].size:
        if raw[dmap.valid].max() > 65535:
            raise ValueError(f"depth exceeds the 16-bit limit of {PNG16_MAX_DEPTH:.3f} m")
        if raw[dmap.valid].min() < 1:
            raise ValueError("valid depth too small to represent (raw value rounds to 0)")
    if not cv2.imwrite(str(path), raw.astype(np.uint16)):
        raise OSError(f"cannot write {path}")


def read_depth_png16(path):
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise OSError(f"cannot read {path}")
    if raw.ndim != 2 or raw.dtype != np.uint16:
        raise ValueError(f"{path} is not a single-channel 16-bit image")
    valid = raw != 0
    return DepthMap(depth=raw.astype(np.float64) / PNG16_SCALE, valid=valid)


def write_image_png8(image, path):
    img = np.asarray(image)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("image must be 2-D uint8")
    if not cv2.imwrite(str(path), img):
        raise OSError(f"cannot write {path}")


def read_image_png8(path):
    img = cv2.imread(str(path), cv2.IMREAD_GRAYSCALE)
    if img is None:
        raise OSError(f"cannot read {path}")
    return img


def write_pfm(dmap, path):
    """Grayscale PFM, float32, bottom-up rows, negative scale = little-endian.

    Invalid pixels are stored as 0, matching the PNG16 convention.
    """
    data = np.where(dmap.valid, dmap.depth, 0.0).astype("<f4")
    with open(path, "wb") as fh:
        fh.write(f"Pf\n{dmap.width} {dmap.height}\n-1.0\n".encode("ascii"))
        fh.write(np.flipud(data).tobytes())


def read_pfm(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    m = re.match(rb"^(P[fF])\n(\d+) (\d+)\n(-?\d+(?:\.\d+)?)\n", blob)
    if m is None or m.group(1) != b"Pf":
        raise ValueError(f"{path} is not a grayscale PFM file")
    w, h = int(m.group(2)), int(m.group(3))
    scale = float(m.group(4))
    dtype = "<f4" if scale < 0 else ">f4"
    payload = blob[m.end():]
    if len(payload) != w * h * 4:
        raise ValueError(f"{path} payload has {len(payload)} bytes, expected {w * h * 4}")
    data = np.frombuffer(payload, dtype=dtype).reshape(h, w)
    depth = np.flipud(data).astype(np.float64)
    return DepthMap(depth=depth, valid=depth != 0)


def _img_name(i):
    return f"{i:04d}_img.png"


def _depth_name(i):
    return f"{i:04d}_depth.png"


def write_dataset(out_dir, spec, n_train, n_test, seed):
    """Generate n_train + n_test scenes and write them with a manifest.

    Scene i is seeded from (seed, i), so the directory content is a pure
    function of (spec, counts, seed).
    """
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for i in range(n_train + n_test):
        scene_seed = int(np.random.SeedSequence((seed, i)).generate_state(1)[0])
        img, dmap = generate_scene(SceneSpec(
            seed=scene_seed, width=spec.width, height=spec.height,
            depth_min=spec.depth_min, depth_max=spec.depth_max,
            num_shapes=spec.num_shapes, sigma0=spec.sigma0, sparsity=spec.sparsity))
        write_image_png8(img, os.path.join(out_dir, _img_name(i)))
        write_depth_png16(dmap, os.path.join(out_dir, _depth_name(i)))
        rows.append({"index": i, "image": _img_name(i), "depth": _depth_name(i),
                     "width": spec.width, "height": spec.height,
                     "valid_pixels": dmap.n_valid,
                     "split": "train" if i < n_train else "test"})
    with open(os.path.join(out_dir, "manifest.csv"), "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["index", "image", "depth", "width",
                                                "height", "valid_pixels", "split"])
        writer.writeheader()
        writer.writerows(rows)
    return rows


def read_dataset(data_dir):
    """Load (image, DepthMap, split) triples listed in manifest.csv."""
    manifest = os.path.join(data_dir, "manifest.csv")
    if not os.path.isfile(manifest):
        raise OSError(f"no manifest.csv in {data_dir}")
    out = []
    with open(manifest, newline="") as fh:
        for row in csv.DictReader(fh):
            img = read_image_png8(os.path.join(data_dir, row["image"]))
            dmap = read_depth_png16(os.path.join(data_dir, row["depth"]))
            out.append((img, dmap, row["split"]))
    if not out:
        raise ValueError(f"manifest in {data_dir} lists no samples")
    return out

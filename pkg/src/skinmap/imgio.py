"""24-bit BMP codec, mask files and dataset manifests.

BMP support is deliberately narrow and bit-exact: uncompressed 24-bit
Windows BMP only, 14-byte file header ("BM") + 40-byte BITMAPINFOHEADER,
bottom-up rows padded to 4 bytes, channel order B,G,R. write_bmp emits a
canonical form (zeroed reserved/resolution fields, pixel data at offset
54), so read_bmp(write_bmp(img)) == img always, and write_bmp(read_bmp(b))
== b for files already in canonical form. Top-down (negative height) files
are rejected.

Mask files are 24-bit BMPs where white means skin: writes are strict
(255,255,255)/(0,0,0), reads are tolerant (any nonzero pixel is skin).

Manifests are CSV lines "image_path,truth,split" where truth is a mask
path or one of the labels ALL_SKIN / NO_SKIN, and split is train or test.
Lines starting with '#' and blank lines are ignored.
"""

import csv
import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FILE_HEADER_SIZE = 14
INFO_HEADER_SIZE = 40
PIXEL_OFFSET = FILE_HEADER_SIZE + INFO_HEADER_SIZE

ALL_SKIN = "ALL_SKIN"
NO_SKIN = "NO_SKIN"
SPLITS = ("train", "test")


class BmpError(ValueError):
    """Malformed or unsupported BMP data."""


class ManifestError(ValueError):
    """Malformed dataset manifest."""


def _row_stride(width):
    return (width * 3 + 3) // 4 * 4


def read_bmp(data):
    """Decode an uncompressed 24-bit BMP into an (H, W, 3) uint8 RGB array."""
    if len(data) < PIXEL_OFFSET:
        raise BmpError(
            f"truncated header: need {PIXEL_OFFSET} bytes, got {len(data)}"
        )
    if data[:2] != b"BM":
        raise BmpError(f"not a BMP file: bad magic {data[:2]!r}")
    file_size, _, _, offset = struct.unpack_from("<IHHI", data, 2)
    (
        header_size,
        width,
        height,
        planes,
        bits,
        compression,
    ) = struct.unpack_from("<IiiHHI", data, FILE_HEADER_SIZE)
    if header_size != INFO_HEADER_SIZE:
        raise BmpError(
            f"unsupported DIB header size {header_size}; "
            f"expected BITMAPINFOHEADER ({INFO_HEADER_SIZE})"
        )
    if bits != 24:
        raise BmpError(f"unsupported bit depth {bits}; only 24-bit is supported")
    if compression != 0:
        raise BmpError(
            f"unsupported compression {compression}; only uncompressed is supported"
        )
    if height < 0:
        raise BmpError("top-down BMP (negative height) is not supported")
    if width <= 0 or height == 0:
        raise BmpError(f"invalid dimensions {width}x{height}")
    if planes != 1:
        raise BmpError(f"header/size inconsistency: planes = {planes}, expected 1")
    if file_size != len(data):
        raise BmpError(
            f"header/size inconsistency: header declares {file_size} bytes, "
            f"file has {len(data)}"
        )
    if offset < PIXEL_OFFSET or offset > len(data):
        raise BmpError(f"header/size inconsistency: pixel data offset {offset}")
    stride = _row_stride(width)
    needed = stride * height
    if offset + needed > len(data):
        raise BmpError(
            f"truncated pixel data: need {needed} bytes at offset {offset}, "
            f"file has {len(data)}"
        )
    rows = np.frombuffer(data, dtype=np.uint8, count=needed, offset=offset)
    rows = rows.reshape(height, stride)
    bgr = rows[:, : width * 3].reshape(height, width, 3)
    # bottom-up file rows to top-left origin, BGR to RGB
    return np.ascontiguousarray(bgr[::-1, :, ::-1])


def write_bmp(image):
    """Encode an (H, W, 3) uint8 RGB array as a canonical 24-bit BMP."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"expected (height, width, 3) image, got shape {image.shape}")
    if image.shape[0] < 1 or image.shape[1] < 1:
        raise ValueError(f"empty image with shape {image.shape}")
    if image.dtype != np.uint8:
        raise ValueError(f"expected uint8 image, got dtype {image.dtype}")
    height, width = image.shape[:2]
    stride = _row_stride(width)
    data_size = stride * height
    header = struct.pack(
        "<2sIHHI", b"BM", PIXEL_OFFSET + data_size, 0, 0, PIXEL_OFFSET
    ) + struct.pack(
        "<IiiHHIIiiII",
        INFO_HEADER_SIZE,
        width,
        height,
        1,
        24,
        0,
        data_size,
        0,
        0,
        0,
        0,
    )
    rows = np.zeros((height, stride), dtype=np.uint8)
    rows[:, : width * 3] = image[::-1, :, ::-1].reshape(height, width * 3)
    return header + rows.tobytes()


def read_mask(data):
    """Decode a mask BMP; any nonzero pixel counts as skin."""
    return read_bmp(data).any(axis=2)


def write_mask(mask):
    """Encode a bool mask as a strict black/white 24-bit BMP."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError(f"expected (height, width) mask, got shape {mask.shape}")
    image = np.zeros(mask.shape + (3,), dtype=np.uint8)
    image[mask] = 255
    return write_bmp(image)


@dataclass(frozen=True)
class ManifestEntry:
    image_path: str  # as written in the manifest
    truth: str  # mask path, ALL_SKIN or NO_SKIN
    split: str
    line: int  # 1-based manifest line number

    @property
    def truth_is_label(self):
        return self.truth in (ALL_SKIN, NO_SKIN)


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple
    base_dir: Path

    def for_split(self, split="all"):
        if split == "all":
            return list(self.entries)
        if split not in SPLITS:
            raise ValueError(f"unknown split {split!r}; expected train, test or all")
        return [e for e in self.entries if e.split == split]

    def filtered(self, split="all"):
        """New manifest restricted to one split (or 'all' for a copy)."""
        return DatasetManifest(tuple(self.for_split(split)), self.base_dir)

    def counts(self):
        """Entry totals by split and by ground-truth class."""
        out = {"entries": len(self.entries), "train": 0, "test": 0,
               "all_skin": 0, "no_skin": 0, "mask": 0}
        for e in self.entries:
            out[e.split] += 1
            if e.truth == ALL_SKIN:
                out["all_skin"] += 1
            elif e.truth == NO_SKIN:
                out["no_skin"] += 1
            else:
                out["mask"] += 1
        return out

    def _read(self, rel_path):
        path = self.base_dir / rel_path
        return path.read_bytes()

    def load_entry(self, entry):
        """Load (image, truth_mask) for one entry, validating dimensions."""
        try:
            image = read_bmp(self._read(entry.image_path))
        except BmpError as e:
            raise BmpError(f"{entry.image_path}: {e}") from e
        shape = image.shape[:2]
        if entry.truth == ALL_SKIN:
            return image, np.ones(shape, dtype=bool)
        if entry.truth == NO_SKIN:
            return image, np.zeros(shape, dtype=bool)
        try:
            truth = read_mask(self._read(entry.truth))
        except BmpError as e:
            raise BmpError(f"{entry.truth}: {e}") from e
        if truth.shape != shape:
            raise ValueError(
                f"{entry.truth}: mask dimensions {truth.shape[1]}x{truth.shape[0]} "
                f"do not match image {shape[1]}x{shape[0]} ({entry.image_path})"
            )
        return image, truth

    def fingerprint(self):
        """Digest of entry metadata and file contents, for report headers."""
        digest = hashlib.sha256()
        for e in self.entries:
            digest.update(f"{e.image_path}|{e.truth}|{e.split}\n".encode())
            digest.update(self._read(e.image_path))
            if not e.truth_is_label:
                digest.update(self._read(e.truth))
        return digest.hexdigest()[:16]


def read_manifest(text, base_dir="."):
    """Parse manifest CSV text; paths stay relative to base_dir."""
    entries = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if len(fields) != 3:
            raise ManifestError(
                f"line {lineno}: expected 3 fields (image,truth,split), "
                f"got {len(fields)}"
            )
        image_path, truth, split = fields
        if not image_path:
            raise ManifestError(f"line {lineno}: empty image path")
        if not truth:
            raise ManifestError(f"line {lineno}: empty truth field")
        if split not in SPLITS:
            raise ManifestError(
                f"line {lineno}: unknown split {split!r}; expected train or test"
            )
        if image_path in seen:
            raise ManifestError(
                f"duplicate image path {image_path!r} on lines "
                f"{seen[image_path]} and {lineno}"
            )
        seen[image_path] = lineno
        entries.append(
            ManifestEntry(image_path=image_path, truth=truth, split=split, line=lineno)
        )
    return DatasetManifest(entries=tuple(entries), base_dir=Path(base_dir))


def load_manifest(path):
    """Read and parse a manifest file; entries resolve against its directory."""
    path = Path(path)
    return read_manifest(path.read_text(), base_dir=path.parent)

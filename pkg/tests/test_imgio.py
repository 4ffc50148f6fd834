import struct

import numpy as np
import pytest

from skinmap import (
    BmpError,
    ManifestError,
    read_bmp,
    read_manifest,
    read_mask,
    write_bmp,
    write_mask,
)
from skinmap.imgio import load_manifest

from conftest import random_image


def bmp_bytes(width, height, bgr_rows_bottom_up):
    """Hand-assemble a canonical BMP from raw padded row bytes."""
    stride = (width * 3 + 3) // 4 * 4
    body = b"".join(bgr_rows_bottom_up)
    assert len(body) == stride * height
    header = struct.pack("<2sIHHI", b"BM", 54 + len(body), 0, 0, 54)
    header += struct.pack("<IiiHHIIiiII", 40, width, height, 1, 24, 0, len(body), 0, 0, 0, 0)
    return header + body


ONE_RED = bmp_bytes(1, 1, [bytes([0, 0, 255]) + b"\x00"])

# 2x2 with distinct corners; file rows are bottom-up, so the first body row
# holds the image's bottom row
TWO_BY_TWO = bmp_bytes(
    2,
    2,
    [
        bytes([255, 0, 0]) + bytes([0, 255, 0]) + b"\x00\x00",  # bottom: blue, green
        bytes([0, 0, 255]) + bytes([255, 255, 255]) + b"\x00\x00",  # top: red, white
    ],
)


class TestReadBmp:
    def test_one_pixel_red_fixture(self):
        assert len(ONE_RED) == 58
        img = read_bmp(ONE_RED)
        assert img.shape == (1, 1, 3)
        assert img[0, 0].tolist() == [255, 0, 0]

    def test_two_by_two_corners_flip_to_top_left_origin(self):
        img = read_bmp(TWO_BY_TWO)
        assert img[0, 0].tolist() == [255, 0, 0]  # red top-left
        assert img[0, 1].tolist() == [255, 255, 255]  # white top-right
        assert img[1, 0].tolist() == [0, 0, 255]  # blue bottom-left
        assert img[1, 1].tolist() == [0, 255, 0]  # green bottom-right

    def test_empty_input_is_truncated_header(self):
        with pytest.raises(BmpError, match="truncated header"):
            read_bmp(b"")

    def test_bad_magic(self):
        data = b"PM" + ONE_RED[2:]
        with pytest.raises(BmpError, match="magic"):
            read_bmp(data)

    def test_unsupported_bit_depth(self):
        bad = bytearray(ONE_RED)
        struct.pack_into("<H", bad, 28, 8)
        with pytest.raises(BmpError, match="bit depth"):
            read_bmp(bytes(bad))

    def test_unsupported_compression(self):
        bad = bytearray(ONE_RED)
        struct.pack_into("<I", bad, 30, 1)
        with pytest.raises(BmpError, match="compression"):
            read_bmp(bytes(bad))

    def test_negative_height_rejected(self):
        bad = bytearray(ONE_RED)
        struct.pack_into("<i", bad, 22, -1)
        with pytest.raises(BmpError, match="top-down"):
            read_bmp(bytes(bad))

    def test_truncated_pixels(self):
        with pytest.raises(BmpError, match="header/size"):
            read_bmp(ONE_RED[:-2])
        # size field consistent but pixel data short
        short = bytearray(ONE_RED[:-2])
        struct.pack_into("<I", short, 2, len(short))
        with pytest.raises(BmpError, match="truncated pixel data"):
            read_bmp(bytes(short))

    def test_size_field_mismatch(self):
        bad = bytearray(ONE_RED)
        struct.pack_into("<I", bad, 2, 1000)
        with pytest.raises(BmpError, match="header/size inconsistency"):
            read_bmp(bytes(bad))

    def test_unsupported_dib_header(self):
        bad = bytearray(ONE_RED)
        struct.pack_into("<I", bad, 14, 124)
        with pytest.raises(BmpError, match="DIB header"):
            read_bmp(bytes(bad))

    def test_noncanonical_gap_before_pixels_still_reads(self):
        # pixel data moved 4 bytes further in; still a valid (non-canonical) file
        stride_row = bytes([0, 0, 255]) + b"\x00"
        body = b"\xee\xee\xee\xee" + stride_row
        header = struct.pack("<2sIHHI", b"BM", 54 + len(body), 0, 0, 58)
        header += struct.pack("<IiiHHIIiiII", 40, 1, 1, 1, 24, 0, 4, 0, 0, 0, 0)
        img = read_bmp(header + body)
        assert img[0, 0].tolist() == [255, 0, 0]


class TestWriteBmp:
    def test_one_pixel_red_matches_fixture(self):
        img = np.array([[[255, 0, 0]]], dtype=np.uint8)
        assert write_bmp(img) == ONE_RED

    def test_round_trip_random_buffer(self, rng):
        img = rng.integers(0, 256, size=(3, 7, 3), dtype=np.uint8)
        assert np.array_equal(read_bmp(write_bmp(img)), img)

    def test_canonical_file_round_trips_byte_identical(self):
        assert write_bmp(read_bmp(TWO_BY_TWO)) == TWO_BY_TWO

    @pytest.mark.parametrize("width,pad", [(1, 1), (2, 2), (3, 3), (4, 0), (5, 1)])
    def test_row_padding(self, width, pad):
        img = np.zeros((2, width, 3), dtype=np.uint8)
        data = write_bmp(img)
        stride = width * 3 + pad
        assert len(data) == 54 + 2 * stride

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            write_bmp(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(ValueError):
            write_bmp(np.zeros((0, 4, 3), dtype=np.uint8))
        with pytest.raises(ValueError):
            write_bmp(np.zeros((4, 4, 3), dtype=np.float64))


class TestMasks:
    def test_all_white_mask(self):
        mask = np.ones((2, 2), dtype=bool)
        assert read_mask(write_mask(mask)).sum() == 4

    def test_round_trip(self, rng):
        mask = rng.random((5, 9)) < 0.5
        assert np.array_equal(read_mask(write_mask(mask)), mask)

    def test_gray_pixel_reads_as_skin(self):
        img = np.full((1, 1, 3), 128, dtype=np.uint8)
        assert read_mask(write_bmp(img)).tolist() == [[True]]

    def test_written_masks_are_strict_black_white(self, rng):
        mask = rng.random((4, 4)) < 0.5
        img = read_bmp(write_mask(mask))
        assert set(np.unique(img)) <= {0, 255}


class TestManifest:
    def test_basic_parse(self, tmp_path):
        m = read_manifest(
            "# comment\n"
            "a.bmp,ALL_SKIN,train\n"
            "\n"
            "b.bmp,masks/b.bmp,test\n"
            "c.bmp,NO_SKIN,train\n",
            base_dir=tmp_path,
        )
        assert m.counts() == {
            "entries": 3, "train": 2, "test": 1,
            "all_skin": 1, "no_skin": 1, "mask": 1,
        }
        assert [e.split for e in m.entries] == ["train", "test", "train"]

    def test_duplicate_paths_report_both_lines(self):
        text = "a.bmp,ALL_SKIN,train\nb.bmp,NO_SKIN,test\na.bmp,NO_SKIN,test\n"
        with pytest.raises(ManifestError, match=r"lines 1 and 3"):
            read_manifest(text)

    def test_unknown_split_token(self):
        with pytest.raises(ManifestError, match="line 1.*split"):
            read_manifest("a.bmp,ALL_SKIN,validation\n")

    def test_malformed_row(self):
        with pytest.raises(ManifestError, match="line 2.*3 fields"):
            read_manifest("a.bmp,ALL_SKIN,train\nb.bmp,test\n")

    def test_split_filtering(self, tmp_path):
        m = read_manifest(
            "a.bmp,ALL_SKIN,train\nb.bmp,NO_SKIN,test\n", base_dir=tmp_path
        )
        assert [e.image_path for e in m.for_split("train")] == ["a.bmp"]
        assert [e.image_path for e in m.for_split("all")] == ["a.bmp", "b.bmp"]
        assert m.filtered("test").entries[0].image_path == "b.bmp"

    def test_label_truth_synthesizes_masks(self, tmp_path, rng):
        img = random_image(rng, max_side=8)
        (tmp_path / "a.bmp").write_bytes(write_bmp(img))
        m = read_manifest("a.bmp,ALL_SKIN,train", base_dir=tmp_path)
        image, truth = m.load_entry(m.entries[0])
        assert truth.all() and truth.shape == image.shape[:2]

        m = read_manifest("a.bmp,NO_SKIN,train", base_dir=tmp_path)
        _, truth = m.load_entry(m.entries[0])
        assert not truth.any()

    def test_mask_backed_truth_and_dimension_check(self, tmp_path, rng):
        img = rng.integers(0, 256, size=(4, 6, 3), dtype=np.uint8)
        mask = rng.random((4, 6)) < 0.5
        (tmp_path / "a.bmp").write_bytes(write_bmp(img))
        (tmp_path / "a_mask.bmp").write_bytes(write_mask(mask))
        m = read_manifest("a.bmp,a_mask.bmp,test", base_dir=tmp_path)
        _, truth = m.load_entry(m.entries[0])
        assert np.array_equal(truth, mask)

        wrong = np.zeros((3, 6), dtype=bool)
        (tmp_path / "a_mask.bmp").write_bytes(write_mask(wrong))
        with pytest.raises(ValueError, match="a_mask.bmp"):
            m.load_entry(m.entries[0])

    def test_load_manifest_resolves_relative_to_file(self, tmp_path, rng):
        sub = tmp_path / "ds"
        sub.mkdir()
        img = random_image(rng, max_side=4)
        (sub / "a.bmp").write_bytes(write_bmp(img))
        (sub / "manifest.csv").write_text("a.bmp,ALL_SKIN,train\n")
        m = load_manifest(sub / "manifest.csv")
        image, _ = m.load_entry(m.entries[0])
        assert image.shape == img.shape

    def test_fingerprint_tracks_content(self, tmp_path, rng):
        img = random_image(rng, max_side=4)
        (tmp_path / "a.bmp").write_bytes(write_bmp(img))
        m = read_manifest("a.bmp,ALL_SKIN,train", base_dir=tmp_path)
        fp1 = m.fingerprint()
        other = img.copy()
        other[0, 0, 0] ^= 0xFF
        (tmp_path / "a.bmp").write_bytes(write_bmp(other))
        assert m.fingerprint() != fp1

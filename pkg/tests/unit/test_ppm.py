"""Unit tests for the P6 reader and writer."""
import numpy as np
import pytest

from rwflow.errors import ParameterError, PpmFormatError
from rwflow.utils.ppm import PpmImage, decode_ppm, encode_ppm, read_ppm, synthetic_image, write_ppm


def _raster(width, height):
    return bytes(range(width * height * 3))


class TestDecode:
    """Test cases for decode_ppm."""

    def test_comment_free_file_round_trips(self):
        """Decoding then encoding reproduces the bytes."""
        data = b"P6\n2 3\n255\n" + _raster(2, 3)
        image = decode_ppm(data)
        assert (image.width, image.height) == (2, 3)
        assert encode_ppm(image) == data

    def test_pixel_layout(self):
        """Pixels are stored row-major as RGB triples."""
        image = decode_ppm(b"P6 2 1 255\n" + bytes([1, 2, 3, 4, 5, 6]))
        assert image.channel(0).tolist() == [[1, 4]]
        assert image.channel(2).tolist() == [[3, 6]]

    def test_comments_are_consumed(self):
        """Header comments are skipped and not written back."""
        data = b"P6\n# made by hand\n2 1 # trailing\n255\n" + _raster(2, 1)
        image = decode_ppm(data)
        assert image.width == 2
        assert encode_ppm(image) == b"P6\n2 1\n255\n" + _raster(2, 1)

    def test_binary_raster_may_start_with_whitespace_bytes(self):
        """Only one separator byte follows the max value."""
        raster = b"\n\n\n"
        assert decode_ppm(b"P6\n1 1\n255\n" + raster).pixels.tobytes() == raster

    @pytest.mark.parametrize("data, offset", [
        (b"P5\n1 1\n255\n\x00\x00\x00", 0),
        (b"P6\n2 x 255\n", 5),
        (b"P6\n1 1\n65535\n\x00\x00\x00", 12),
        (b"P6\n1 1\n255\n\x00\x01", 13),
        (b"P6\n1 1\n255", 10),
        (b"P6\n1", 4),
    ])
    def test_error_offsets(self, data, offset):
        """Malformed files report the byte offset of the problem."""
        with pytest.raises(PpmFormatError) as info:
            decode_ppm(data)
        assert info.value.offset == offset

    def test_zero_dimensions(self):
        """Zero width is rejected."""
        with pytest.raises(PpmFormatError):
            decode_ppm(b"P6\n0 1\n255\n")


class TestFiles:
    """Test cases for reading and writing files."""

    def test_write_then_read(self, tmp_path):
        """A written image reads back unchanged, creating parent folders."""
        image = synthetic_image(5, 3, seed=1)
        path = write_ppm(image, tmp_path / "out" / "card.ppm")
        assert path.exists()
        assert np.array_equal(read_ppm(path).pixels, image.pixels)

    def test_missing_file(self, tmp_path):
        """Missing inputs raise an OSError."""
        with pytest.raises(OSError):
            read_ppm(tmp_path / "absent.ppm")


class TestImage:
    """Test cases for PpmImage and the synthetic card."""

    def test_shape_validated(self):
        """Pixels must be (height, width, 3)."""
        with pytest.raises(ParameterError):
            PpmImage(np.zeros((2, 2)))

    def test_from_channels(self):
        """Channels stack in R, G, B order."""
        red, green, blue = (np.full((2, 2), v) for v in (1, 2, 3))
        image = PpmImage.from_channels(red, green, blue)
        assert image.pixels[0, 0].tolist() == [1, 2, 3]

    def test_synthetic_is_deterministic(self):
        """Same seed, same image."""
        assert np.array_equal(synthetic_image(8, 8, 3).pixels, synthetic_image(8, 8, 3).pixels)

    def test_synthetic_ramps(self):
        """Red ramps across columns and green down rows, both ending at 255."""
        image = synthetic_image(8, 4, 0)
        assert image.channel(0)[0].tolist() == [32, 64, 96, 128, 159, 191, 223, 255]
        assert image.channel(1)[:, 0].tolist() == [64, 128, 191, 255]

    def test_synthetic_odd_size(self):
        """Odd sizes crop the 2x2 blue blocks."""
        image = synthetic_image(5, 3, seed=2)
        assert image.pixels.shape == (3, 5, 3)
        blue = image.channel(2)
        assert blue[0, 0] == blue[1, 1]

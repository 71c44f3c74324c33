import gzip
import struct

import numpy as np
import pytest

from dwiself.core.exceptions import (
    BadMagicError,
    DimensionError,
    DwiselfIOError,
    MalformedHeaderError,
    OutputWriteError,
    TruncatedFileError,
    UnsupportedDtypeError,
    UnsupportedExtensionError,
)
from dwiself.io import (
    RAW_HEADER,
    RAW_MAGIC,
    read_bvals_bvecs,
    read_mask,
    read_nifti,
    read_raw,
    read_volume,
    write_nifti,
    write_raw,
    write_volume,
)
from dwiself.testing import random_volume
from dwiself.volume import Volume4D

NIFTI_CODES = {"int16": (4, 16), "float32": (16, 32), "float64": (64, 64), "uint8": (2, 8)}


def nifti_bytes(
    data,
    *,
    dtype="float32",
    endian="<",
    sizeof_hdr=348,
    dim0=None,
    datatype=None,
    vox_offset=352.0,
    slope=0.0,
    inter=0.0,
    pixdim=(1.0, 1.0, 1.0),
    magic=b"n+1\x00",
):
    """Hand-built single-file NIfTI-1 image."""
    data = np.asarray(data)
    code, bitpix = NIFTI_CODES[dtype]
    header = bytearray(352)
    dims = [dim0 if dim0 is not None else data.ndim, *data.shape]
    dims += [1] * (8 - len(dims))
    struct.pack_into(f"{endian}i", header, 0, sizeof_hdr)
    struct.pack_into(f"{endian}8h", header, 40, *dims)
    struct.pack_into(f"{endian}hh", header, 70, datatype if datatype is not None else code, bitpix)
    struct.pack_into(f"{endian}8f", header, 76, 1.0, *pixdim, 1.0, 0.0, 0.0, 0.0)
    struct.pack_into(f"{endian}fff", header, 108, vox_offset, slope, inter)
    header[344:348] = magic
    blob = np.asarray(data, dtype=np.dtype(dtype).newbyteorder(endian)).tobytes(order="F")
    return bytes(header) + blob


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_bytes(payload)
    return path


# ----------------------------------------------------------------------- NIfTI


@pytest.mark.parametrize("endian", ["<", ">"])
def test_read_handcrafted_4d(tmp_path, endian):
    data = np.arange(16, dtype=np.float32).reshape((2, 2, 2, 2), order="F")
    path = _write(tmp_path, "dwi.nii", nifti_bytes(data, endian=endian, pixdim=(2.0, 2.0, 2.5)))
    vol = read_nifti(path)
    assert vol.dims == (2, 2, 2, 2)
    assert vol.dtype == np.float32
    assert vol.dtype.isnative
    np.testing.assert_array_equal(vol.data, data)
    assert vol.data[1, 0, 0, 0] == 1.0
    assert vol.data[0, 0, 0, 1] == 8.0
    assert vol.spacing == (2.0, 2.0, 2.5)


def test_3d_image_reads_as_single_volume(tmp_path):
    data = np.arange(8, dtype=np.float64).reshape((2, 2, 2))
    vol = read_nifti(_write(tmp_path, "b0.nii", nifti_bytes(data, dtype="float64")))
    assert vol.dims == (2, 2, 2, 1)
    np.testing.assert_array_equal(vol.data[..., 0], data)


def test_scaling_is_applied(tmp_path):
    data = np.full((2, 2, 2), 3, dtype=np.int16)
    vol = read_nifti(_write(tmp_path, "scaled.nii", nifti_bytes(data, dtype="int16", slope=2.0, inter=1.0)))
    assert vol.dtype == np.float64
    np.testing.assert_array_equal(vol.data, 7.0)


def test_unscaled_integers_become_float(tmp_path):
    data = np.arange(8, dtype=np.int16).reshape((2, 2, 2))
    vol = read_nifti(_write(tmp_path, "ints.nii", nifti_bytes(data, dtype="int16")))
    assert vol.dtype == np.float64
    np.testing.assert_array_equal(vol.data[..., 0], data)


@pytest.mark.parametrize("name", ["out.nii", "out.nii.gz"])
def test_nifti_round_trip(tmp_path, name):
    vol = random_volume((4, 3, 2, 3), seed=3, spacing=(1.5, 2.0, 2.5))
    write_nifti(vol, tmp_path / name)
    back = read_nifti(tmp_path / name)
    assert back.dims == vol.dims
    np.testing.assert_array_equal(back.data, vol.data.astype(np.float32))
    assert back.spacing == vol.spacing
    np.testing.assert_allclose(back.affine, vol.affine)


def test_written_file_layout(tmp_path):
    vol = Volume4D(np.array([1.0, 2.0]).reshape((1, 1, 1, 2)))
    write_nifti(vol, tmp_path / "tiny.nii")
    raw = (tmp_path / "tiny.nii").read_bytes()
    assert len(raw) == 360
    assert struct.unpack_from("<i", raw, 0)[0] == 348
    assert raw[344:348] == b"n+1\x00"
    assert np.frombuffer(raw, dtype="<f4", offset=352).tolist() == [1.0, 2.0]


def test_gzip_output_is_reproducible(tmp_path):
    vol = random_volume((3, 3, 3, 2))
    write_nifti(vol, tmp_path / "a.nii.gz")
    write_nifti(vol, tmp_path / "b.nii.gz")
    assert (tmp_path / "a.nii.gz").read_bytes() == (tmp_path / "b.nii.gz").read_bytes()


GOOD = np.zeros((2, 2, 2, 2), dtype=np.float32)


@pytest.mark.parametrize(
    "payload, error",
    [
        (nifti_bytes(GOOD)[:100], TruncatedFileError),
        (nifti_bytes(GOOD, sizeof_hdr=540), MalformedHeaderError),
        (nifti_bytes(GOOD, magic=b"ni1\x00"), BadMagicError),
        (nifti_bytes(GOOD, magic=b"n+2\x00"), BadMagicError),
        (nifti_bytes(GOOD, dim0=5), DimensionError),
        (nifti_bytes(GOOD, dim0=0), MalformedHeaderError),
        (nifti_bytes(GOOD, dim0=9), MalformedHeaderError),
        (nifti_bytes(np.zeros((2, 2, 2), dtype=np.uint8), dtype="uint8"), UnsupportedDtypeError),
        (nifti_bytes(GOOD, datatype=999), UnsupportedDtypeError),
        (nifti_bytes(GOOD)[:-4], TruncatedFileError),
        (nifti_bytes(GOOD, vox_offset=348.0), MalformedHeaderError),
    ],
)
def test_malformed_nifti(tmp_path, payload, error):
    with pytest.raises(error):
        read_nifti(_write(tmp_path, "bad.nii", payload))


def test_malformed_errors_are_io_errors(tmp_path):
    with pytest.raises(DwiselfIOError) as info:
        read_nifti(_write(tmp_path, "bad.nii", nifti_bytes(GOOD)[:-4]))
    assert info.value.exit_code == 2
    assert "expected 416 bytes, got 412" in str(info.value)


def test_non_finite_data_is_rejected(tmp_path):
    data = np.zeros((2, 2, 2), dtype=np.float32)
    data[0, 0, 0] = np.nan
    with pytest.raises(MalformedHeaderError, match="NaN"):
        read_nifti(_write(tmp_path, "nan.nii", nifti_bytes(data)))


def test_gzip_errors(tmp_path):
    payload = gzip.compress(nifti_bytes(GOOD))
    with pytest.raises(TruncatedFileError):
        read_nifti(_write(tmp_path, "cut.nii.gz", payload[: len(payload) // 2]))
    with pytest.raises(MalformedHeaderError):
        read_nifti(_write(tmp_path, "junk.nii.gz", b"definitely not gzip data"))
    np.testing.assert_array_equal(read_nifti(_write(tmp_path, "ok.nii.gz", payload)).data, GOOD)


def test_unsupported_extension(tmp_path):
    path = _write(tmp_path, "dwi.img", nifti_bytes(GOOD))
    with pytest.raises(UnsupportedExtensionError):
        read_nifti(path)
    with pytest.raises(UnsupportedExtensionError):
        read_volume(path)
    with pytest.raises(UnsupportedExtensionError):
        write_volume(random_volume((2, 2, 2, 2)), tmp_path / "out.mha")


def test_missing_file(tmp_path):
    with pytest.raises(DwiselfIOError, match="cannot read"):
        read_volume(tmp_path / "absent.nii")


def test_read_mask(tmp_path):
    flags = np.zeros((3, 3, 3), dtype=np.float32)
    flags[1, 1, :] = 1.0
    flags[0, 0, 0] = -2.0
    mask = read_mask(_write(tmp_path, "mask.nii", nifti_bytes(flags)))
    assert mask.dims == (3, 3, 3)
    assert mask.count == 3
    with pytest.raises(DimensionError):
        read_mask(_write(tmp_path, "mask4d.nii", nifti_bytes(GOOD)))


# ------------------------------------------------------------------------- raw


@pytest.mark.parametrize("dtype", [np.float32, np.float64])
def test_raw_round_trip_is_bit_exact(tmp_path, dtype):
    vol = Volume4D(random_volume((3, 4, 5, 2), seed=4).data.astype(dtype), spacing=(1.0, 2.0, 2.5))
    write_raw(vol, tmp_path / "vol.raw")
    back = read_raw(tmp_path / "vol.raw")
    assert back.dtype == dtype
    assert back.spacing == vol.spacing
    assert np.array_equal(back.data, vol.data)


def test_raw_layout(tmp_path):
    data = np.arange(6, dtype=np.float64).reshape((3, 2, 1, 1), order="F")
    write_volume(Volume4D(data), tmp_path / "vol.p2s")
    raw = (tmp_path / "vol.p2s").read_bytes()
    assert RAW_HEADER.itemsize == 39
    assert raw[:7] == RAW_MAGIC
    assert struct.unpack_from("<4I", raw, 7) == (3, 2, 1, 1)
    assert struct.unpack_from("<I", raw, 23)[0] == 2
    assert np.frombuffer(raw, dtype="<f8", offset=39).tolist() == [0, 1, 2, 3, 4, 5]
    assert len(raw) == 39 + 6 * 8


def test_raw_errors(tmp_path):
    vol = random_volume((2, 2, 2, 2))
    write_raw(vol, tmp_path / "vol.raw")
    good = (tmp_path / "vol.raw").read_bytes()

    with pytest.raises(TruncatedFileError, match="expected 128 data bytes, got 125"):
        read_raw(_write(tmp_path, "cut.raw", good[:-3]))
    with pytest.raises(TruncatedFileError):
        read_raw(_write(tmp_path, "short.raw", good[:20]))
    with pytest.raises(BadMagicError):
        read_raw(_write(tmp_path, "magic.raw", b"P2SRAW2" + good[7:]))
    with pytest.raises(MalformedHeaderError, match="trailing"):
        read_raw(_write(tmp_path, "long.raw", good + b"\x00" * 8))

    bad_code = bytearray(good)
    struct.pack_into("<I", bad_code, 23, 3)
    with pytest.raises(UnsupportedDtypeError):
        read_raw(_write(tmp_path, "code.raw", bytes(bad_code)))

    zero_dim = bytearray(good)
    struct.pack_into("<I", zero_dim, 7, 0)
    with pytest.raises(DimensionError):
        read_raw(_write(tmp_path, "zero.raw", bytes(zero_dim)))

    # 65536**4 wraps to zero in int64
    huge = bytearray(good[:39])
    struct.pack_into("<4I", huge, 7, 65536, 65536, 65536, 65536)
    with pytest.raises(TruncatedFileError, match=f"expected {8 * 65536**4} data bytes, got 0"):
        read_raw(_write(tmp_path, "huge.raw", bytes(huge)))


# ------------------------------------------------------------------- gradients


@pytest.mark.parametrize("layout", ["fsl", "rows"])
def test_read_gradient_files(tmp_path, layout):
    bvecs = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
    (tmp_path / "dwi.bval").write_text("0 1000 1000 1000\n")
    np.savetxt(tmp_path / "dwi.bvec", bvecs.T if layout == "fsl" else bvecs)
    bvals, vecs = read_bvals_bvecs(tmp_path / "dwi.bval", tmp_path / "dwi.bvec")
    np.testing.assert_array_equal(bvals, [0, 1000, 1000, 1000])
    np.testing.assert_array_equal(vecs, bvecs)


def test_gradient_file_errors(tmp_path):
    (tmp_path / "dwi.bval").write_text("0 1000\n")
    (tmp_path / "dwi.bvec").write_text("1 0\n0 1\n")
    with pytest.raises(MalformedHeaderError):
        read_bvals_bvecs(tmp_path / "dwi.bval", tmp_path / "dwi.bvec")
    (tmp_path / "text.bval").write_text("zero thousand\n")
    with pytest.raises(MalformedHeaderError):
        read_bvals_bvecs(tmp_path / "text.bval", tmp_path / "dwi.bvec")
    with pytest.raises(DwiselfIOError):
        read_bvals_bvecs(tmp_path / "absent.bval", tmp_path / "dwi.bvec")


# ---------------------------------------------------------------- atomic writes


def test_failed_write_leaves_nothing_behind(tmp_path):
    target = tmp_path / "taken"
    target.mkdir()
    with pytest.raises(OutputWriteError):
        write_raw(random_volume((2, 2, 2, 2)), target)
    assert [p.name for p in tmp_path.iterdir()] == ["taken"]
    with pytest.raises(OutputWriteError):
        write_nifti(random_volume((2, 2, 2, 2)), tmp_path / "missing" / "out.nii")

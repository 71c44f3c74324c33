from typing import Any

import numpy as np
from msgspec.json import Decoder, Encoder

__all__ = ("encode_json", "decode_json")


def _enc_hook(obj: Any) -> Any:
    """Teach msgspec about numpy scalars and arrays."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise NotImplementedError(f"Objects of type {type(obj)!r} are not JSON serializable")


encoder, decoder = Encoder(enc_hook=_enc_hook), Decoder()
decode_json = decoder.decode


def encode_json(data: Any) -> str:
    return encoder.encode(data).decode("utf-8")

from ._serialization import decode_json, encode_json

__all__ = (
    "decode_json",
    "encode_json"
)

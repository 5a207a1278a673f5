"""Decode-the-message task over five classical ciphers.

The prompt always states the encryption rule (parameters included), so the
answer is the mechanical decryption. Schemes: caesar, atbash,
keyword_substitution, vigenere, railfence. Plaintexts are corpus words,
uppercased and concatenated until they reach the requested length.

Every scheme is a bijection on fixed-length strings, so verification
re-encrypts the candidate and compares ciphertexts instead of decrypting.
"""

from __future__ import annotations

import string
from typing import Any, Dict, Optional, Tuple

from ..corpus import load_words
from ..errors import ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64

ALPHA = string.ascii_uppercase
SCHEMES = ("caesar", "atbash", "keyword_substitution", "vigenere", "railfence")


def _dedupe_letters(word: str) -> str:
    seen = []
    for ch in word:
        if ch not in seen:
            seen.append(ch)
    return "".join(seen)


def keyword_alphabet(keyword: str) -> str:
    """Distinct keyword letters first, then the rest of A-Z in order."""
    head = _dedupe_letters(keyword.upper())
    return head + "".join(ch for ch in ALPHA if ch not in head)


def _rail_pattern(n: int, rails: int):
    r, dr = 0, 1
    for _ in range(n):
        yield r
        if rails > 1:
            if r == rails - 1:
                dr = -1
            elif r == 0:
                dr = 1
            r += dr


def cipher_apply(scheme: str, params: Dict[str, Any], plaintext: str) -> str:
    scheme = scheme.replace("-", "_")
    if any(ch not in ALPHA for ch in plaintext):
        raise PayloadError("plaintext must be uppercase A-Z")
    if scheme == "caesar":
        k = params["shift"] % 26
        return "".join(ALPHA[(ord(c) - 65 + k) % 26] for c in plaintext)
    if scheme == "atbash":
        return "".join(ALPHA[25 - (ord(c) - 65)] for c in plaintext)
    if scheme == "keyword_substitution":
        table = keyword_alphabet(params["keyword"])
        return "".join(table[ord(c) - 65] for c in plaintext)
    if scheme == "vigenere":
        key = params["keyword"].upper()
        return "".join(
            ALPHA[(ord(c) - 65 + ord(key[i % len(key)]) - 65) % 26]
            for i, c in enumerate(plaintext)
        )
    if scheme == "railfence":
        rails = params["rails"]
        rows = [[] for _ in range(rails)]
        for i, r in enumerate(_rail_pattern(len(plaintext), rails)):
            rows[r].append(plaintext[i])
        return "".join("".join(row) for row in rows)
    raise ParamError(f"unknown cipher scheme {scheme!r}")


def rule_text(scheme: str, params: Dict[str, Any]) -> str:
    scheme = scheme.replace("-", "_")
    if scheme == "caesar":
        return (
            f"Each letter of the message was shifted forward by {params['shift']} "
            "positions in the alphabet, wrapping from Z back around to A."
        )
    if scheme == "atbash":
        return (
            "Each letter of the message was replaced by its mirror image in the "
            "alphabet: A becomes Z, B becomes Y, C becomes X, and so on."
        )
    if scheme == "keyword_substitution":
        return (
            "A substitution alphabet was built from the keyword "
            f"{params['keyword'].upper()!r}: write the keyword's distinct letters "
            "first, then the remaining letters of the alphabet in their usual "
            "order. Plaintext A was replaced by the 1st letter of that alphabet, "
            "B by the 2nd, and so on."
        )
    if scheme == "vigenere":
        return (
            f"The repeating key {params['keyword'].upper()!r} was written under "
            "the message and each message letter was shifted forward by the "
            "alphabet position of the key letter below it (A shifts by 0, B by 1, "
            "..., Z by 25), wrapping around past Z."
        )
    if scheme == "railfence":
        return (
            f"The message was written in a zigzag across {params['rails']} rails "
            "(down to the bottom rail, back up to the top, and so on) and the "
            "ciphertext was read off rail by rail, top rail first."
        )
    raise ParamError(f"unknown cipher scheme {scheme!r}")


def _corpus_keywords() -> Tuple[str, ...]:
    return tuple(w for w in load_words() if 3 <= len(w) <= 7)


def sample_plaintext(plaintext_len: int, rng: SplitMix64) -> str:
    words = load_words()
    parts = []
    total = 0
    while total < plaintext_len:
        w = rng.choice(words)
        parts.append(w.upper())
        total += len(w)
    return "".join(parts)


def cipher_generate(scheme: str, plaintext_len: int, seed: int) -> Tuple[Dict[str, Any], str]:
    scheme = scheme.replace("-", "_")
    if scheme not in SCHEMES:
        raise ParamError(f"unknown cipher scheme {scheme!r}")
    if plaintext_len < 1:
        raise ParamError(f"plaintext_len must be >= 1, got {plaintext_len}")
    rng = SplitMix64(seed)
    plaintext = sample_plaintext(plaintext_len, rng)
    params: Dict[str, Any] = {}
    if scheme == "caesar":
        params["shift"] = rng.randint(1, 25)
    elif scheme in ("keyword_substitution", "vigenere"):
        params["keyword"] = rng.choice(_corpus_keywords()).upper()
    elif scheme == "railfence":
        params["rails"] = rng.randint(2, 5)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "cipher",
        "scheme": scheme,
        "params": params,
        "ciphertext": cipher_apply(scheme, params, plaintext),
        "rule": rule_text(scheme, params),
    }
    return payload, plaintext


def verify_cipher(payload: Dict[str, Any], candidate: Any) -> bool:
    if not isinstance(candidate, str):
        return False
    text = candidate.upper()
    if not text or any(ch not in ALPHA for ch in text):
        return False
    try:
        return cipher_apply(payload["scheme"], payload["params"], text) == payload["ciphertext"]
    except (KeyError, TypeError, ParamError, PayloadError):
        return False


def render_cipher(payload: Dict[str, Any]) -> str:
    return (
        "Decrypt this message. "
        + payload["rule"]
        + "\n\nCiphertext: "
        + payload["ciphertext"]
        + "\n\nRespond with the decrypted message only (letters A-Z, no spaces)."
    )


def _parse_plaintext(payload: Dict[str, Any], text: str) -> Optional[str]:
    s = "".join(text.split()).upper()
    if not s or any(ch not in ALPHA for ch in s):
        return None
    return s


SCHEMA = ParamSchema((
    ParamSpec("scheme", "int", 0, 4, easy=0, hard=3),
    ParamSpec("plaintext_len", "int", 1, 40, easy=5, hard=12),
))

DESCRIPTOR = TaskDescriptor(
    id="cipher",
    schema=SCHEMA,
    generate=lambda params, seed: cipher_generate(
        SCHEMES[params["scheme"]], params["plaintext_len"], seed
    ),
    verify=verify_cipher,
    render=render_cipher,
    parse_answer=_parse_plaintext,
    serialize_answer=str,
)

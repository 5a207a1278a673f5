"""The default task registry: all 18 bundled generators in one place."""

from __future__ import annotations

from .arith.cryptarithm import DESCRIPTOR as _cryptarithm
from .arith.game24 import DESCRIPTOR as _game_of_24
from .arith.mathador import DESCRIPTOR as _mathador
from .arith.mathpath import DESCRIPTOR as _math_path
from .deduction.objectcounting import DESCRIPTOR as _object_counting
from .deduction.weboflies import DESCRIPTOR as _web_of_lies
from .formal.boolexpr import DESCRIPTOR as _boolean_expressions
from .formal.cipher import DESCRIPTOR as _cipher
from .formal.dyck import DESCRIPTOR_COMPLETION as _dyck_language
from .formal.dyck import DESCRIPTOR_ERRORS as _dyck_language_errors
from .formal.wordsort import DESCRIPTOR as _word_sorting
from .grid.campsite import DESCRIPTOR as _campsite
from .grid.futoshiki import DESCRIPTOR as _futoshiki
from .grid.minesweeper import DESCRIPTOR as _minesweeper
from .grid.numbrix import DESCRIPTOR as _numbrix
from .grid.skyscraper import DESCRIPTOR as _skyscraper
from .grid.starplacement import DESCRIPTOR as _star_placement
from .grid.sudoku import DESCRIPTOR as _sudoku
from .registry import Registry

BUILTIN_DESCRIPTORS = (
    _sudoku,
    _futoshiki,
    _skyscraper,
    _campsite,
    _star_placement,
    _numbrix,
    _minesweeper,
    _game_of_24,
    _cryptarithm,
    _mathador,
    _math_path,
    _dyck_language,
    _dyck_language_errors,
    _boolean_expressions,
    _cipher,
    _word_sorting,
    _web_of_lies,
    _object_counting,
)


def default_registry() -> Registry:
    """A fresh registry holding every bundled task, in canonical order."""
    registry = Registry()
    for desc in BUILTIN_DESCRIPTORS:
        registry.register(desc)
    return registry

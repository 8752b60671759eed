"""Exact arithmetic on symbolic reals and the Z-module toolkit."""
from .symbolic import (
    TRIVIAL_BASIS,
    Ordering,
    SymBasis,
    SymReal,
    as_fraction,
    floor_div,
    parse_symreal,
    reduce_into,
    sqrt_enclosure,
    sym_arith,
    sym_cmp,
    vector,
)
from .zmodule import (
    ZModule,
    complement,
    complement_split,
    content,
    is_primitive,
    saturate,
    zmod_equal,
    zmod_from_generators,
    zmod_member,
    zmod_rank,
)
from .glz import (
    UnimodularMatrix,
    gl2z_word,
    glz_elementary_word,
    glz_solve,
    letter_matrix,
    word_product,
    word_product2,
)

__all__ = [
    "TRIVIAL_BASIS", "Ordering", "SymBasis", "SymReal", "as_fraction", "floor_div",
    "parse_symreal", "reduce_into", "sqrt_enclosure", "sym_arith", "sym_cmp", "vector",
    "ZModule", "complement", "complement_split", "content", "is_primitive", "saturate",
    "zmod_equal", "zmod_from_generators", "zmod_member", "zmod_rank",
    "UnimodularMatrix", "gl2z_word", "glz_elementary_word", "glz_solve",
    "letter_matrix", "word_product", "word_product2",
]

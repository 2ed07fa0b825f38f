"""Lossless text compression with information-gain aggregate alphabets."""

__version__ = "0.1.0"

from .builder import BuildConfig, BuildResult, BuildStep, build, marginal_header_cost
from .coder import CodingModel, decode, encode
from .container import compress, decompress
from .estimator import AggregateAlphabetEncoder
from .exceptions import (AggsymError, AlphabetError, CapacityError, DomainError,
                         FormatError, StructuralError)
from .gain import (GainBreakdown, StringCandidate, char_gain, gain_frequency_form,
                   message_code_length, oracle_gain)
from .header import decode_header, encode_header
from .symbols import (STANDARD_CHARS, Alphabet, FrequencyTable, Symbol, TokenStream,
                      char_multiplicity, expand)
from .tokenizer import (AggregateCandidate, apply_aggregate, enumerate_candidates,
                        tokenize_base)

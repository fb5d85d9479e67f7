#!/usr/bin/env python3
"""
Exception hierarchy for the Links-Gould toolkit
Every error raised by the library derives from LinksGouldError
"""

from typing import Optional


class LinksGouldError(Exception):
    """Base class for all library errors"""


class ChargeMismatch(LinksGouldError, ValueError):
    pass


class NotDivisible(LinksGouldError, ValueError):
    pass


class OddExponent(NotDivisible):
    pass


class ZeroPolynomial(LinksGouldError, ValueError):
    pass


class BraidSyntaxError(LinksGouldError, ValueError):
    pass


class GeneratorOutOfRange(LinksGouldError, ValueError):
    pass


class NotAKnot(LinksGouldError, ValueError):
    pass


class ParseError(LinksGouldError, ValueError):
    pass


class ValidationError(LinksGouldError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoEnhancement(LinksGouldError):
    pass


class AmbiguousEnhancement(LinksGouldError):
    pass


class InvariantViolation(LinksGouldError):
    pass


class TranscriptionError(LinksGouldError):
    pass


class SpectralMismatch(LinksGouldError):
    pass


class TwistMismatch(LinksGouldError):
    pass


class HopfMismatch(LinksGouldError):
    pass


class CharacterResidue(LinksGouldError):
    pass


class SingularSystem(LinksGouldError, ValueError):
    pass


class IdentityViolated(LinksGouldError):
    """An exact identity failed; `difference` holds LHS - RHS"""

    def __init__(self, message: str, difference=None):
        self.difference = difference
        super().__init__(message)

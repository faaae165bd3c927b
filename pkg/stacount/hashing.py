# -*- coding: utf-8 -*-
"""The XOR hash family over a formula's variables, and hashed chains.

A hash is H(x) = a0 xor a1 x1 xor ... xor an xn with every coefficient a
fair coin. Conjoining the constraint H(x) = true keeps each assignment with
probability one half.
"""
from collections import namedtuple

from .formula import XorConstraint
from .lib.exceptions import InsanityException
from .lib.rng_utils import make_stream, seed_path


class XorHash(namedtuple('XorHash', ['a0', 'coeffs'])):
    """One hash function; ``coeffs[i]`` is the coefficient of variable i+1."""
    __slots__ = ()

    def __new__(cls, a0, coeffs):
        return super(XorHash, cls).__new__(
            cls, bool(a0), tuple(1 if c else 0 for c in coeffs))

    @property
    def n(self):
        return len(self.coeffs)

    def evaluate(self, assignment):
        """H(alpha) for an Assignment or a sequence of truth values."""
        values = getattr(assignment, 'values', assignment)
        if len(values) != self.n:
            raise InsanityException("Hash over %s variables applied to %s "
                                    "values" % (self.n, len(values)))
        result = self.a0
        for c, value in zip(self.coeffs, values):
            if c and value:
                result = not result
        return result


def draw_hash(n, stream):
    """Draw a0..an as independent fair coins from ``stream``."""
    bits = stream.integers(0, 2, size=n + 1)
    return XorHash(bits[0], bits[1:])


def hash_to_constraint(h):
    """The XOR constraint satisfied exactly where H(x) is true."""
    variables = [i + 1 for i, c in enumerate(h.coeffs) if c]
    return XorConstraint(variables, not h.a0)


class HashedChain(namedtuple('HashedChain', ['base', 'hashes'])):
    """A base formula and the hashes H1..Hd conjoined to it, in order."""
    __slots__ = ()

    def __new__(cls, base, hashes=()):
        return super(HashedChain, cls).__new__(cls, base, tuple(hashes))

    @property
    def depth(self):
        return len(self.hashes)

    def prefix(self, i):
        if not 0 <= i <= self.depth:
            raise InsanityException("Prefix %s of a depth-%s chain" % (
                i, self.depth))
        return HashedChain(self.base, self.hashes[:i])

    def formula(self, i=None):
        """F_i: the base conjoined with the first i hash constraints."""
        if i is None:
            i = self.depth
        return self.base.with_xors(
            hash_to_constraint(h) for h in self.prefix(i).hashes)


def chain_extend(c, h):
    """Append one hash, leaving c untouched."""
    if h.n != c.base.num_vars:
        raise InsanityException("Hash over %s variables cannot extend a "
                                "chain over %s" % (h.n, c.base.num_vars))
    return HashedChain(c.base, c.hashes + (h,))


class LazyChain(object):
    """A hashed chain whose hashes are drawn only when first needed.

    Hash H_k comes from the stream at ``seed + (k,)``, so the chain is fixed
    by its seed no matter which prefixes are asked for, or in what order.
    """

    def __init__(self, base, seed):
        self.base = base
        self.path = seed_path(seed)
        self._chain = HashedChain(base)
        self._formulas = {0: base}

    @property
    def drawn(self):
        """How many hashes have been materialized so far."""
        return self._chain.depth

    def hash(self, k):
        """H_k, for k >= 1."""
        if k < 1:
            raise InsanityException("Hashes are numbered from 1, got %s" % k)
        while self._chain.depth < k:
            index = self._chain.depth + 1
            h = draw_hash(self.base.num_vars, make_stream(self.path, index))
            self._chain = chain_extend(self._chain, h)
        return self._chain.hashes[k - 1]

    def chain(self, i):
        if i > 0:
            self.hash(i)
        return self._chain.prefix(i)

    def formula(self, i):
        """F_i of this chain."""
        if i not in self._formulas:
            self._formulas[i] = self.chain(i).formula()
        return self._formulas[i]

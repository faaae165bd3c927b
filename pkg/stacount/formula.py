# -*- coding: utf-8 -*-
"""CNF formulas with optional XOR constraints, and their DIMACS form.

DIMACS grammar understood here:

    c a comment
    p cnf <num_vars> <num_clauses>
    1 -2 3 0            a clause, may span lines until the 0
    x 1 -2 3 0          an XOR: parity of the variables is true, flipped
                        once for every negative literal ("x1 -2 0" also works)

The header count covers clauses and XOR lines together.
"""
from collections import namedtuple

from .lib.exceptions import InsanityException, ParsingException
from .lib.rng_utils import make_stream


class Clause(namedtuple('Clause', ['literals'])):
    """A disjunction of signed variable indices. Never empty."""
    __slots__ = ()

    def __new__(cls, literals):
        literals = tuple(int(lit) for lit in literals)
        if not literals:
            raise InsanityException("Clauses cannot be empty. Use the "
                                    "CONTRADICTION XOR instead.")
        if 0 in literals:
            raise InsanityException("0 is not a literal: %s" % (literals,))
        if len(set(literals)) != len(literals):
            raise InsanityException("Duplicate literal in clause %s" %
                                    (literals,))
        return super(Clause, cls).__new__(cls, literals)

    @property
    def variables(self):
        return tuple(abs(lit) for lit in self.literals)

    def is_tautology(self):
        seen = set(self.literals)
        return any(-lit in seen for lit in self.literals)


class XorConstraint(namedtuple('XorConstraint', ['vars', 'rhs'])):
    """The parity of ``vars`` must equal ``rhs``.

    With no variables the constraint is a tautology (rhs false) or the
    contradiction (rhs true).
    """
    __slots__ = ()

    def __new__(cls, vars, rhs):
        vars = tuple(int(v) for v in vars)
        for v in vars:
            if v <= 0:
                raise InsanityException("XOR variables must be positive "
                                        "indices, got %s" % (vars,))
        if len(set(vars)) != len(vars):
            raise InsanityException("Duplicate variable in XOR %s" % (vars,))
        return super(XorConstraint, cls).__new__(cls, vars, bool(rhs))

    @property
    def mask(self):
        """Bit v is set for every variable v of the constraint."""
        m = 0
        for v in self.vars:
            m |= 1 << v
        return m

    def is_tautology(self):
        return not self.vars and not self.rhs

    def is_contradiction(self):
        return not self.vars and self.rhs


CONTRADICTION = XorConstraint((), True)


class Assignment(object):
    """A total assignment to variables 1..num_vars."""
    __slots__ = ('values',)

    def __init__(self, values):
        self.values = tuple(bool(v) for v in values)

    @classmethod
    def from_int(cls, code, num_vars):
        """Bit i-1 of code is the value of variable i."""
        return cls((code >> i) & 1 for i in range(num_vars))

    @classmethod
    def from_literals(cls, literals, num_vars):
        values = [None] * num_vars
        for lit in literals:
            values[abs(lit) - 1] = lit > 0
        if None in values:
            raise InsanityException("Literals %s do not cover all %s "
                                    "variables" % (literals, num_vars))
        return cls(values)

    @property
    def num_vars(self):
        return len(self.values)

    def value(self, var):
        return self.values[var - 1]

    def literals(self):
        return [v if val else -v for v, val in enumerate(self.values, 1)]

    def to_int(self):
        code = 0
        for i, val in enumerate(self.values):
            if val:
                code |= 1 << i
        return code

    def __eq__(self, other):
        return isinstance(other, Assignment) and self.values == other.values

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return '<Assignment %s>' % ' '.join(str(l) for l in self.literals())


class CnfFormula(object):
    """An immutable CNF formula over variables 1..num_vars, conjoined with a
    list of XOR constraints."""
    __slots__ = ('_num_vars', '_clauses', '_xors')

    def __init__(self, num_vars, clauses=(), xors=()):
        num_vars = int(num_vars)
        if num_vars < 1:
            raise InsanityException("A formula needs at least one variable, "
                                    "got num_vars=%s" % num_vars)
        clauses = tuple(c if isinstance(c, Clause) else Clause(c)
                        for c in clauses)
        xors = tuple(x if isinstance(x, XorConstraint) else XorConstraint(*x)
                     for x in xors)
        # An empty tautology constrains nothing and has no DIMACS spelling.
        xors = tuple(x for x in xors if not x.is_tautology())
        for clause in clauses:
            for v in clause.variables:
                if v > num_vars:
                    raise InsanityException(
                        "Variable %s out of range [1, %s] in clause %s" % (
                            v, num_vars, clause.literals))
        for xor in xors:
            for v in xor.vars:
                if v > num_vars:
                    raise InsanityException(
                        "Variable %s out of range [1, %s] in XOR %s" % (
                            v, num_vars, xor.vars))
        object.__setattr__(self, '_num_vars', num_vars)
        object.__setattr__(self, '_clauses', clauses)
        object.__setattr__(self, '_xors', xors)

    def __setattr__(self, key, value):
        raise AttributeError("CnfFormula is immutable")

    def __reduce__(self):
        return CnfFormula, (self._num_vars, self._clauses, self._xors)

    @property
    def num_vars(self):
        return self._num_vars

    @property
    def clauses(self):
        return self._clauses

    @property
    def xors(self):
        return self._xors

    def is_trivially_unsat(self):
        return any(x.is_contradiction() for x in self._xors)

    def with_xors(self, xors):
        """A new formula with ``xors`` appended."""
        return CnfFormula(self._num_vars, self._clauses,
                          self._xors + tuple(xors))

    def with_clauses(self, clauses):
        """A new formula with ``clauses`` appended."""
        return CnfFormula(self._num_vars, self._clauses + tuple(clauses),
                          self._xors)

    def __eq__(self, other):
        return (isinstance(other, CnfFormula) and
                self._num_vars == other._num_vars and
                self._clauses == other._clauses and
                self._xors == other._xors)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._num_vars, self._clauses, self._xors))

    def __repr__(self):
        return '<CnfFormula n=%s clauses=%s xors=%s>' % (
            self._num_vars, len(self._clauses), len(self._xors))


def _parse_int(token, line_number):
    try:
        return int(token)
    except ValueError:
        raise ParsingException("line %s: invalid literal %r" % (line_number,
                                                                token))


def parse_dimacs(text):
    """Parse DIMACS CNF (with the XOR extension) into a CnfFormula.

    :param text: the file contents, as bytes or text
    :return: a CnfFormula
    """
    if isinstance(text, bytes):
        text = text.decode('utf-8', 'replace')

    num_vars = num_declared = header_line = None
    clauses = []
    xors = []
    pending = []
    pending_line = None

    def check_range(lit, line_number):
        if abs(lit) > num_vars:
            raise ParsingException(
                "line %s: variable %s out of range [1, %s]" % (
                    line_number, abs(lit), num_vars))

    for line_number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        if line.startswith('p'):
            if header_line is not None:
                raise ParsingException("line %s: second header, the first "
                                       "was on line %s" % (line_number,
                                                           header_line))
            parts = line.split()
            if len(parts) != 4 or parts[0] != 'p' or parts[1] != 'cnf':
                raise ParsingException("line %s: malformed header %r, "
                                       "expected 'p cnf <n> <m>'" %
                                       (line_number, line))
            num_vars = _parse_int(parts[2], line_number)
            num_declared = _parse_int(parts[3], line_number)
            if num_vars < 1 or num_declared < 0:
                raise ParsingException("line %s: malformed header %r" %
                                       (line_number, line))
            header_line = line_number
            continue
        if header_line is None:
            raise ParsingException("line %s: clause before the 'p cnf' "
                                   "header" % line_number)
        if line.startswith('%'):
            # SATLIB benchmark files end with "%" and a stray "0".
            break
        if line.startswith('x'):
            if pending:
                raise ParsingException("line %s: unterminated clause" %
                                       pending_line)
            tokens = [_parse_int(t, line_number) for t in line[1:].split()]
            if not tokens or tokens[-1] != 0 or 0 in tokens[:-1]:
                raise ParsingException("line %s: XOR line must end with a "
                                       "single 0" % line_number)
            literals = tokens[:-1]
            for lit in literals:
                check_range(lit, line_number)
            variables = [abs(lit) for lit in literals]
            if len(set(variables)) != len(variables):
                raise ParsingException("line %s: repeated variable in XOR" %
                                       line_number)
            negatives = sum(1 for lit in literals if lit < 0)
            xors.append(XorConstraint(variables, negatives % 2 == 0))
            continue

        for token in line.split():
            lit = _parse_int(token, line_number)
            if not pending:
                pending_line = line_number
            if lit == 0:
                if pending:
                    # Repeated literals are legal DIMACS; keep the first.
                    unique = []
                    for p in pending:
                        if p not in unique:
                            unique.append(p)
                    clauses.append(Clause(unique))
                else:
                    xors.append(CONTRADICTION)
                pending = []
            else:
                check_range(lit, line_number)
                pending.append(lit)

    if pending:
        raise ParsingException("line %s: unterminated clause" % pending_line)
    if header_line is None:
        raise ParsingException("line 1: missing 'p cnf' header")
    found = len(clauses) + len(xors)
    if found != num_declared:
        raise ParsingException("line %s: header declares %s clauses, found "
                               "%s" % (header_line, num_declared, found))
    return CnfFormula(num_vars, clauses, xors)


def emit_dimacs(f):
    """Render a formula as DIMACS bytes that parse_dimacs reads back to an
    equal formula."""
    lines = ['p cnf %d %d' % (f.num_vars, len(f.clauses) + len(f.xors))]
    for clause in f.clauses:
        lines.append(' '.join(str(lit) for lit in clause.literals) + ' 0')
    for xor in f.xors:
        if not xor.vars:
            lines.append('x 0')
            continue
        literals = list(xor.vars)
        if not xor.rhs:
            literals[0] = -literals[0]
        lines.append('x ' + ' '.join(str(lit) for lit in literals) + ' 0')
    return ('\n'.join(lines) + '\n').encode('ascii')


def read_dimacs(path):
    with open(path, 'rb') as f:
        return parse_dimacs(f.read())


def write_dimacs(f, path):
    with open(path, 'wb') as out:
        out.write(emit_dimacs(f))


def generate_random_3cnf(n, m, seed):
    """Uniform random 3-CNF: every clause picks three distinct variables and
    three fair signs. Identical (n, m, seed) always gives the same formula.
    """
    if n < 3:
        raise InsanityException("Random 3-CNF needs n >= 3, got %s" % n)
    if m < 0:
        raise InsanityException("Clause count must be non-negative, got %s" %
                                m)
    stream = make_stream(seed)
    clauses = []
    for _ in range(m):
        variables = stream.choice(n, size=3, replace=False) + 1
        signs = stream.integers(0, 2, size=3)
        clauses.append([int(v) if s else -int(v)
                        for v, s in zip(variables, signs)])
    return CnfFormula(n, clauses)


def forced_count_formula(n, k):
    """n variables with the last n-k pinned true, so exactly 2**k models."""
    if not 0 <= k <= n:
        raise InsanityException("Need 0 <= k <= n, got k=%s n=%s" % (k, n))
    return CnfFormula(n, [[v] for v in range(k + 1, n + 1)])

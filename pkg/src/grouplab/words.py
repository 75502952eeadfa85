"""Words over variables and group constants: normal form, text syntax, evaluation.

A word is a finite sequence of letters; each letter is a variable x_i or a
constant label, with exponent +1 or -1.  The empty word denotes the identity.
Text syntax: `x0^-1 * c5 * x0` (variables `xN`, constants `cLABEL`).
"""

import re

from .errors import EvaluationBlocked, UnknownConstant

VAR = "x"
CONST = "c"

_ATOM = re.compile(r"^([xc])(\d+)(?:\^(-?\d+))?$")


class Word:
    """An immutable sequence of (kind, id, exp) letters."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        letters = tuple(letters)
        for letter in letters:
            kind, ident, exp = letter
            if kind not in (VAR, CONST):
                raise ValueError(f"bad letter kind {kind!r}")
            if not isinstance(ident, int) or ident < 0:
                raise ValueError(f"bad letter id {ident!r}")
            if kind == CONST and ident < 1:
                raise ValueError("constant labels start at 1")
            if exp not in (1, -1):
                raise ValueError(f"letter exponent must be +-1, got {exp!r}")
        object.__setattr__(self, "letters", letters)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return Word()
        base = self if k > 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word((kind, ident, -exp) for kind, ident, exp in reversed(self.letters))

    def free_vars(self) -> frozenset:
        return frozenset(ident for kind, ident, _ in self.letters if kind == VAR)

    def constants(self) -> frozenset:
        return frozenset(ident for kind, ident, _ in self.letters if kind == CONST)

    def constant_fusions(self) -> tuple:
        """Positions i where letters i and i+1 are both constants (fusable at evaluation)."""
        out = []
        for i in range(len(self.letters) - 1):
            if self.letters[i][0] == CONST and self.letters[i + 1][0] == CONST:
                out.append(i)
        return tuple(out)

    def to_text(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for kind, ident, exp in self.letters:
            atom = f"{kind}{ident}"
            if exp == -1:
                atom += "^-1"
            parts.append(atom)
        return " * ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters = []
        for raw in text.split("*"):
            atom = raw.strip()
            m = _ATOM.match(atom)
            if not m:
                raise ValueError(f"cannot parse word atom {atom!r}")
            kind, ident, exp = m.group(1), int(m.group(2)), m.group(3)
            exp = 1 if exp is None else int(exp)
            if exp == 0:
                continue
            sign = 1 if exp > 0 else -1
            letters.extend([(kind, ident, sign)] * abs(exp))
        return cls(letters)

    def __repr__(self):
        return f"Word({self.to_text()!r})"


def var(i: int, exp: int = 1) -> Word:
    return Word(((VAR, i, 1),)) ** exp


def const(label: int, exp: int = 1) -> Word:
    return Word(((CONST, label, 1),)) ** exp


def normal_form(w: Word) -> Word:
    """Free reduction: drop adjacent letter/formal-inverse pairs.  Idempotent."""
    stack = []
    for letter in w.letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == letter[1] \
                and stack[-1][2] == -letter[2]:
            stack.pop()
        else:
            stack.append(letter)
    return Word(stack)


def evaluate(w: Word, g, assignment) -> int:
    """Left-to-right product of the word's letters in the finite group g.

    assignment maps variable index -> label of g.  Adjacent constants fuse
    here simply because the product is taken in g.
    """
    cur = 1
    for kind, ident, exp in w.letters:
        if kind == VAR:
            if ident not in assignment:
                raise ValueError(f"variable x{ident} unassigned")
            base = assignment[ident]
        else:
            base = ident
        if not 1 <= base <= g.order:
            raise UnknownConstant(f"label {base} outside group of order {g.order}")
        val = base if exp == 1 else g.inv(base)
        cur = g.mul(cur, val)
    return cur


def evaluate_partial(w: Word, t, assignment) -> int:
    """Evaluate over a partial table; raise EvaluationBlocked on any missing cell.

    Inverses use the cells only: y counts as x^-1 when some cell x*y=1 or
    y*x=1 is present (either side certifies the mutual inverse pair).
    """
    cur = 1
    for kind, ident, exp in w.letters:
        base = assignment[ident] if kind == VAR else ident
        if kind == VAR and base is None:
            raise ValueError(f"variable x{ident} unassigned")
        if exp == -1:
            if base == 1:
                val = 1
            else:
                val = t.known_inverse(base)
                if val is None:
                    raise EvaluationBlocked(f"no inverse of {base} derivable from cells")
        else:
            val = base
        if cur == 1:
            cur = val
        elif val == 1:
            pass
        else:
            nxt = t.get(cur, val)
            if nxt is None:
                raise EvaluationBlocked(f"cell ({cur},{val}) absent")
            cur = nxt
    return cur

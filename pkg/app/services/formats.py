"""Line-oriented spec files for algebras and complexes."""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import Algebra, Arrow, PresentationError, QuiverPresentation, algebra_from_quiver, corner
from .complexes import ComplexValidationError, ProjComplex, validate
from .exactlin import Field, make_field

logger = logging.getLogger(__name__)

_SIGNED_TERMS = re.compile(r"\s+([+-])\s+")


class SpecParseError(ValueError):
    """A spec file failed to parse; carries the file, line number and offending text."""

    def __init__(self, source: str, line: int, text: str, message: str) -> None:
        super().__init__(f"{source}:{line}: {message} (in {text.strip()!r})")
        self.source = source
        self.line = line
        self.text = text


@dataclass(frozen=True)
class SpecLine:
    number: int
    text: str
    keyword: str
    args: Tuple[str, ...]


def _lines(text: str) -> List[SpecLine]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        keyword, *args = body.split()
        out.append(SpecLine(number, raw, keyword.lower(), tuple(args)))
    return out


def parse_expression(expression: str) -> List[Tuple[str, Tuple[str, ...]]]:
    """Split ``"2 a b - @1"`` into (coefficient text, arrow word) terms."""
    text = expression.strip()
    if not text:
        raise ValueError("empty path expression")
    sign = "1"
    if text[0] in "+-":
        sign, text = ("-1" if text[0] == "-" else "1"), text[1:].strip()
    pieces = _SIGNED_TERMS.split(text)
    signs = [sign] + ["-1" if s == "-" else "1" for s in pieces[1::2]]
    terms = []
    for s, chunk in zip(signs, pieces[0::2]):
        tokens = chunk.split()
        if not tokens:
            raise ValueError(f"dangling sign in {expression!r}")
        coefficient = "1"
        if re.fullmatch(r"-?\d+(/\d+)?", tokens[0]):
            coefficient, tokens = tokens[0], tokens[1:]
        if s == "-1":
            coefficient = coefficient[1:] if coefficient.startswith("-") else f"-{coefficient}"
        if not tokens:
            raise ValueError(f"term without a path in {expression!r}")
        terms.append((coefficient, tuple(tokens)))
    return terms


# -- algebras -------------------------------------------------------------------


def parse_algebra(
    text: str,
    source: str = "<algebra>",
    field: Optional[Field] = None,
    default_field: str = "101",
) -> Algebra:
    """Build the algebra of an algebra spec; ``field`` overrides the file's own."""
    name = Path(source).stem if source and not source.startswith("<") else "algebra"
    descriptor: Optional[str] = None
    vertices: List[str] = []
    arrows: List[Arrow] = []
    raw_relations: List[SpecLine] = []
    bound: Optional[int] = None

    for line in _lines(text):
        try:
            if line.keyword == "name":
                name = line.args[0]
            elif line.keyword == "field":
                descriptor = line.args[0]
            elif line.keyword == "vertices":
                vertices.extend(line.args)
            elif line.keyword == "arrow":
                label, tail, head = line.args
                arrows.append(Arrow(label, tail, head))
            elif line.keyword == "relation":
                if not line.args:
                    raise ValueError("empty relation")
                raw_relations.append(line)
            elif line.keyword == "bound":
                bound = int(line.args[0])
            else:
                raise ValueError(f"unknown keyword {line.keyword!r}")
        except (ValueError, IndexError) as exc:
            raise SpecParseError(source, line.number, line.text, str(exc) or "missing argument") from None

    if bound is None:
        raise SpecParseError(source, 0, "", "missing 'bound' line")
    try:
        F = field if field is not None else make_field(descriptor or default_field)
    except ValueError as exc:
        raise SpecParseError(source, 0, descriptor or "", str(exc)) from None

    known = {a.label for a in arrows}
    relations = []
    for line in raw_relations:
        expression = " ".join(line.args)
        try:
            terms = parse_expression(expression)
            for _, word in terms:
                unknown = [label for label in word if label not in known]
                if unknown:
                    raise ValueError(f"unknown arrow {unknown[0]!r}")
            relations.append(tuple((F.parse(c), word) for c, word in terms))
        except ValueError as exc:
            raise SpecParseError(source, line.number, line.text, f"bad path expression {expression!r}: {exc}") from None

    presentation = QuiverPresentation(
        field=F,
        vertices=tuple(vertices),
        arrows=tuple(arrows),
        relations=tuple(relations),
        bound=bound,
        name=name,
    )
    try:
        return algebra_from_quiver(presentation)
    except PresentationError as exc:
        raise SpecParseError(source, 0, "", str(exc)) from None


def load_algebra(path: str, field: Optional[Field] = None, default_field: str = "101") -> Algebra:
    return parse_algebra(Path(path).read_text(encoding="utf-8"), str(path), field, default_field)


def algebra_to_text(A: Algebra) -> str:
    """Spec text of an algebra built from a quiver presentation."""
    q = A.presentation
    if q is None:
        raise ValueError(f"{A.name} has no quiver presentation")
    lines = [f"name {q.name}", f"field {'rational' if not q.field.characteristic else q.field.characteristic}"]
    lines.append("vertices " + " ".join(q.vertices))
    lines.extend(f"arrow {a.label} {a.source} {a.target}" for a in q.arrows)
    for relation in q.relations:
        lines.append("relation " + _format_terms(q.field, [(c, " ".join(w)) for c, w in relation]))
    lines.append(f"bound {q.bound}")
    return "\n".join(lines) + "\n"


# -- elements and complexes -------------------------------------------------------


def _base(A: Algebra) -> Tuple[Algebra, Optional[List[int]]]:
    """The algebra carrying the path symbols, and the basis of ``A`` inside it."""
    if A.origin is not None:
        return A.origin.parent, list(A.origin.basis)
    return A, None


def parse_element(A: Algebra, expression: str) -> np.ndarray:
    """Evaluate a path expression in ``A`` (or in the parent of a corner)."""
    base, basis = _base(A)
    F = base.field
    total = base.zero()
    for coefficient, word in parse_expression(expression):
        if len(word) == 1 and word[0].startswith("@"):
            key = word[0]
            if key not in base.symbols:
                raise ValueError(f"unknown vertex {key[1:]!r}")
            value = base.basis_vector(base.symbols[key])
        else:
            value = None
            for label in word:
                if label not in base.symbols or label.startswith("@"):
                    raise ValueError(f"unknown arrow {label!r}")
                step = base.basis_vector(base.symbols[label])
                value = step if value is None else base.multiply(value, step)
        total = F.reduce(total + F.scalar(F.parse(coefficient)) * value)
    if basis is None:
        return total
    outside = [b for b in range(base.dim) if b not in set(basis)]
    if not F.is_zero(total[outside]):
        raise ValueError(f"{expression!r} does not lie in the corner {A.name}")
    return total[basis].copy()


def _format_terms(F: Field, terms: Sequence[Tuple[Any, str]]) -> str:
    parts = []
    for coefficient, word in terms:
        value = F.to_json(coefficient)
        text = str(value)
        negative = text.startswith("-")
        magnitude = text[1:] if negative else text
        body = word if magnitude == "1" else f"{magnitude} {word}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"{'-' if negative else '+'} {body}")
    return " ".join(parts)


def element_to_text(A: Algebra, x: np.ndarray) -> str:
    F = A.field
    terms = [(x[b], A.labels[b]) for b in range(A.dim) if not F.is_zero(x[b])]
    if not terms:
        return "0"
    return _format_terms(F, terms)


def parse_complex(
    text: str,
    algebras: Dict[str, Algebra],
    source: str = "<complex>",
) -> ProjComplex:
    """Build and validate a complex; ``algebras`` maps names to loaded algebras."""
    A: Optional[Algebra] = None
    subset: Optional[List[int]] = None
    terms: Dict[int, Tuple[int, ...]] = {}
    entries: List[Tuple[SpecLine, int, int, int, str]] = []

    for line in _lines(text):
        try:
            if line.keyword == "algebra":
                key = line.args[0]
                if key not in algebras:
                    raise ValueError(f"unknown algebra {key!r}; loaded: {sorted(algebras)}")
                A = algebras[key]
            elif line.keyword == "corner":
                if A is None:
                    raise ValueError("'corner' before 'algebra'")
                subset = [_vertex_index(A, v) for v in line.args]
            elif line.keyword == "term":
                if A is None:
                    raise ValueError("'term' before 'algebra'")
                degree = int(line.args[0])
                if degree in terms:
                    raise ValueError(f"degree {degree} listed twice")
                terms[degree] = tuple(_vertex_index(A, v) for v in line.args[1:])
            elif line.keyword == "entry":
                degree, row, col = (int(t) for t in line.args[:3])
                expression = " ".join(line.args[3:])
                if not expression:
                    raise ValueError("entry without an expression")
                entries.append((line, degree, row, col, expression))
            else:
                raise ValueError(f"unknown keyword {line.keyword!r}")
        except (ValueError, IndexError) as exc:
            raise SpecParseError(source, line.number, line.text, str(exc) or "missing argument") from None
    if A is None:
        raise SpecParseError(source, 0, "", "missing 'algebra' line")

    target = A
    if subset is not None:
        target = corner(A, subset)
        position = {v: k for k, v in enumerate(sorted(set(subset)))}
        for degree, vertices in terms.items():
            outside = [A.vertex_names[v] for v in vertices if v not in position]
            if outside:
                raise SpecParseError(source, 0, "", f"degree {degree} uses vertices {outside} outside the corner")
        terms = {d: tuple(position[v] for v in vertices) for d, vertices in terms.items()}

    F = A.field
    diffs: Dict[int, np.ndarray] = {}
    for line, degree, row, col, expression in entries:
        rows, cols = terms.get(degree + 1, ()), terms.get(degree, ())
        if not (0 <= row < len(rows) and 0 <= col < len(cols)):
            raise SpecParseError(source, line.number, line.text, f"entry ({row}, {col}) outside a {len(rows)}x{len(cols)} differential")
        try:
            value = parse_element(target, expression)
        except ValueError as exc:
            raise SpecParseError(source, line.number, line.text, f"bad path expression {expression!r}: {exc}") from None
        if degree not in diffs:
            diffs[degree] = F.zeros((len(rows), len(cols), target.dim))
        diffs[degree][row, col] = value
    X = ProjComplex.build(target, terms, diffs)
    try:
        validate(X)
    except ComplexValidationError as exc:
        raise SpecParseError(source, 0, "", str(exc)) from None
    logger.debug("parsed %s from %s", X, source)
    return X


def load_complex(path: str, algebras: Dict[str, Algebra]) -> ProjComplex:
    return parse_complex(Path(path).read_text(encoding="utf-8"), algebras, str(path))


def _vertex_index(A: Algebra, name: str) -> int:
    try:
        return A.vertex_names.index(name)
    except ValueError:
        raise ValueError(f"unknown vertex {name!r}") from None


def complex_to_text(X: ProjComplex, algebra_name: Optional[str] = None) -> str:
    """Spec text that :func:`parse_complex` reads back to the same data."""
    A = X.algebra
    base, _ = _base(A)
    lines = [f"algebra {algebra_name or base.name}"]
    if A.origin is not None:
        lines.append("corner " + " ".join(base.vertex_names[v] for v in A.origin.vertices))
    for d, vertices in sorted(X.terms.items()):
        lines.append(f"term {d} " + " ".join(A.vertex_names[v] for v in vertices))
    for d, matrix in sorted(X.diffs.items()):
        for r in range(matrix.shape[0]):
            for c in range(matrix.shape[1]):
                if not A.field.is_zero(matrix[r, c]):
                    lines.append(f"entry {d} {r} {c} {element_to_text(A, matrix[r, c])}")
    return "\n".join(lines) + "\n"

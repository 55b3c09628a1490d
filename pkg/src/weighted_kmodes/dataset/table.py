"""
Delimited categorical tables and their integer encoding.

Raw string tokens are mapped to dense value ids per attribute in
first-occurrence order over the rows, so encoding a given file is
deterministic and any row prefix encodes to a prefix of the dictionaries.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ...utils import get_logger
from ..errors import ConfigError, DataFormatError, InputError, ValueIndexError

logger = get_logger(__name__)

MISSING_POLICIES = ("category", "drop")


@dataclass(frozen=True)
class TableFormat:
    """How a delimited data file is laid out."""
    delimiter: str = ","
    class_column: Optional[int] = None
    drop_columns: Tuple[int, ...] = ()
    missing_marker: str = "?"
    missing_policy: str = "category"
    skip_initial_space: bool = True

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1:
            raise ConfigError(f"delimiter must be a single character, got {self.delimiter!r}")
        if self.missing_policy not in MISSING_POLICIES:
            raise ConfigError(
                f"missing_policy must be one of {MISSING_POLICIES}, got {self.missing_policy!r}"
            )
        object.__setattr__(self, "drop_columns", tuple(int(c) for c in self.drop_columns))


@dataclass(frozen=True)
class AttributeSchema:
    """Per-attribute dictionaries between raw tokens and dense value ids."""
    values: Tuple[Tuple[str, ...], ...]
    names: Tuple[str, ...] = ()
    _index: Tuple[Dict[str, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        values = tuple(tuple(str(v) for v in column) for column in self.values)
        object.__setattr__(self, "values", values)
        index = []
        for j, column in enumerate(values):
            lookup = {token: t for t, token in enumerate(column)}
            if len(lookup) != len(column):
                raise InputError(f"attribute {j} has duplicate tokens")
            index.append(lookup)
        object.__setattr__(self, "_index", tuple(index))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"A{j + 1}" for j in range(len(values))))
        elif len(self.names) != len(values):
            raise InputError("attribute names do not match attribute count")

    @property
    def attribute_count(self) -> int:
        return len(self.values)

    @property
    def cardinalities(self) -> Tuple[int, ...]:
        """Domain size p_j of every attribute."""
        return tuple(len(column) for column in self.values)

    def cardinality(self, attribute: int) -> int:
        self._check_attribute(attribute)
        return len(self.values[attribute])

    def encode(self, attribute: int, token: str) -> int:
        self._check_attribute(attribute)
        try:
            return self._index[attribute][token]
        except KeyError:
            raise ValueIndexError(f"token {token!r} is not in the domain of attribute {attribute}") from None

    def decode(self, attribute: int, value: int) -> str:
        self._check_attribute(attribute)
        if not 0 <= value < len(self.values[attribute]):
            raise ValueIndexError(f"value id {value} out of range for attribute {attribute}")
        return self.values[attribute][value]

    def prefix(self, cardinalities: Sequence[int]) -> "AttributeSchema":
        """Schema restricted to the first cardinalities[j] values of each attribute."""
        return AttributeSchema(
            values=tuple(column[:p] for column, p in zip(self.values, cardinalities)),
            names=self.names,
        )

    def _check_attribute(self, attribute: int) -> None:
        if not 0 <= attribute < len(self.values):
            raise ValueIndexError(f"attribute {attribute} out of range [0, {len(self.values)})")


@dataclass(frozen=True, eq=False)
class EncodedDataset:
    """n x m matrix of value ids plus the schema that decodes it."""
    rows: np.ndarray
    schema: AttributeSchema

    def __post_init__(self) -> None:
        rows = np.array(self.rows, dtype=np.int64, copy=True)
        if rows.ndim != 2:
            raise InputError(f"rows must be a 2-d matrix, got {rows.ndim} dimensions")
        n, m = rows.shape
        if n < 1 or m < 1:
            raise InputError(f"dataset must have at least one object and one attribute, got {n}x{m}")
        if m != self.schema.attribute_count:
            raise InputError(f"rows have {m} attributes but the schema has {self.schema.attribute_count}")
        limits = np.asarray(self.schema.cardinalities, dtype=np.int64)
        if (rows < 0).any() or (rows >= limits[None, :]).any():
            raise InputError("value id outside its attribute domain")
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def m(self) -> int:
        return int(self.rows.shape[1])

    def decode_row(self, row: Sequence[int]) -> Tuple[str, ...]:
        return tuple(self.schema.decode(j, int(v)) for j, v in enumerate(row))

    def head(self, count: int) -> "EncodedDataset":
        """The first `count` objects, with dictionaries trimmed to what they use."""
        if not 1 <= count <= self.n:
            raise ConfigError(f"prefix size must be in [1, {self.n}], got {count}")
        rows = self.rows[:count]
        used = tuple(int(rows[:, j].max()) + 1 for j in range(self.m))
        return EncodedDataset(rows=rows, schema=self.schema.prefix(used))

    @classmethod
    def from_tokens(cls, rows: Sequence[Sequence[str]], names: Sequence[str] = ()) -> "EncodedDataset":
        """Encode an in-memory table of string tokens."""
        frame = pd.DataFrame([list(map(str, row)) for row in rows], dtype=str)
        if frame.empty:
            raise InputError("cannot encode an empty table")
        if frame.isna().any().any():
            bad = int(np.flatnonzero(frame.isna().any(axis=1).to_numpy())[0])
            raise DataFormatError("ragged row", row_index=bad)
        return _encode_columns(frame, list(frame.columns), tuple(names))


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """An encoded dataset with its (optional) ground-truth classes."""
    data: EncodedDataset
    labels: Optional[np.ndarray] = None
    class_names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.labels is None:
            return
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if labels.shape != (self.data.n,):
            raise InputError(f"expected {self.data.n} labels, got {labels.shape[0] if labels.ndim else 0}")
        class_count = len(self.class_names) if self.class_names else int(labels.max()) + 1
        if (labels < 0).any() or (labels >= class_count).any():
            raise InputError("class ids must be dense in [0, class_count)")
        if not self.class_names:
            object.__setattr__(self, "class_names", tuple(str(c) for c in range(class_count)))
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    @property
    def class_count(self) -> int:
        return len(self.class_names) if self.labels is not None else 0

    @property
    def class_sizes(self) -> Tuple[int, ...]:
        if self.labels is None:
            return ()
        return tuple(int(c) for c in np.bincount(self.labels, minlength=self.class_count))

    def head(self, count: int) -> "LabeledDataset":
        data = self.data.head(count)
        if self.labels is None:
            return LabeledDataset(data=data)
        labels = self.labels[:count]
        used = int(labels.max()) + 1
        return LabeledDataset(data=data, labels=labels, class_names=self.class_names[:used])


def load_table(
    source: Union[BinaryIO, bytes, str],
    fmt: TableFormat = TableFormat(),
    name: Optional[str] = None,
) -> LabeledDataset:
    """
    Load a delimited categorical table.

    Args:
        source: Readable byte stream, raw bytes or already-decoded text
        fmt: Table layout (delimiter, class column, missing-value handling)
        name: Name used in error messages (usually the file path)

    Returns:
        The encoded dataset with the class column stripped into labels
    """
    raw = source.read() if hasattr(source, "read") else source
    if isinstance(raw, (bytes, bytearray)):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            # rows are counted like the ragged-row check: non-blank lines only
            row_index = sum(1 for line in raw[: exc.start].split(b"\n")[:-1] if line.strip())
            raise DataFormatError(
                f"invalid UTF-8 byte 0x{raw[exc.start]:02x} at offset {exc.start}", row_index=row_index, source=name
            ) from exc
    else:
        text = str(raw)
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise InputError(f"{name or 'input'}: empty file")

    # no quoting in scope, so the delimiter count is the field count
    width = lines[0].count(fmt.delimiter) + 1
    for row_index, line in enumerate(lines):
        fields = line.count(fmt.delimiter) + 1
        if fields != width:
            raise DataFormatError(
                f"expected {width} fields, found {fields}", row_index=row_index, source=name
            )

    frame = pd.read_csv(
        io.StringIO("\n".join(lines)),
        sep=fmt.delimiter,
        header=None,
        names=list(range(width)),
        dtype=str,
        na_filter=False,
        quoting=csv.QUOTE_NONE,
        skipinitialspace=fmt.skip_initial_space,
        skip_blank_lines=False,
        engine="python",
    )
    if fmt.skip_initial_space:
        frame = frame.apply(lambda column: column.str.strip())

    class_column = _resolve_column(fmt.class_column, width, "class column") if fmt.class_column is not None else None
    dropped = {_resolve_column(c, width, "dropped column") for c in fmt.drop_columns}
    features = [c for c in range(width) if c != class_column and c not in dropped]
    if not features:
        raise InputError(f"{name or 'input'}: no attribute columns left after removing class/ignored columns")

    if fmt.missing_policy == "drop":
        missing = (frame[features] == fmt.missing_marker).any(axis=1)
        if missing.all():
            raise InputError(f"{name or 'input'}: every row contains the missing marker {fmt.missing_marker!r}")
        if missing.any():
            logger.info("Dropping %d rows containing %r", int(missing.sum()), fmt.missing_marker)
        frame = frame.loc[~missing].reset_index(drop=True)

    data = _encode_columns(frame, features, ())
    if class_column is None:
        return LabeledDataset(data=data)
    codes, uniques = pd.factorize(frame[class_column], sort=False)
    return LabeledDataset(
        data=data,
        labels=codes.astype(np.int64),
        class_names=tuple(str(u) for u in uniques),
    )


def load_table_path(path: Union[str, Path], fmt: TableFormat = TableFormat()) -> LabeledDataset:
    """Load a data file from disk; errors name the file."""
    path = Path(path)
    with path.open("rb") as handle:
        dataset = load_table(handle, fmt, name=str(path))
    logger.info(
        "Loaded %s: n=%d, m=%d, classes=%d", path.name, dataset.data.n, dataset.data.m, dataset.class_count
    )
    return dataset


def _resolve_column(column: int, width: int, what: str) -> int:
    resolved = column + width if column < 0 else column
    if not 0 <= resolved < width:
        raise ConfigError(f"{what} {column} does not exist in a table with {width} columns")
    return resolved


def _encode_columns(frame: pd.DataFrame, columns: Sequence, names: Tuple[str, ...]) -> EncodedDataset:
    codes = []
    values = []
    for column in columns:
        column_codes, uniques = pd.factorize(frame[column], sort=False)
        codes.append(column_codes.astype(np.int64))
        values.append(tuple(str(u) for u in uniques))
    return EncodedDataset(
        rows=np.column_stack(codes),
        schema=AttributeSchema(values=tuple(values), names=names),
    )

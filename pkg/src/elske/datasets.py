"""Loaders for the public keyphrase benchmark layouts.

Supported inputs (auto-detected):

* a ``.json``/``.jsonl`` file or a directory containing one: one JSON
  object per line with ``title``, ``abstract`` and ``keyword`` (or
  ``keywords``/``keyphrases``) holding a semicolon-separated string or a
  list — the layout of the widely used benchmark releases;
* Hulth/Inspec directories: ``*.abstr`` text files paired with
  ``*.uncontr`` gold files (semicolon-separated phrases);
* Krapivin directories: ``*.txt`` files with ``--T``/``--A``/``--B``
  section markers paired with ``*.key`` gold files (one phrase per line);
  plain ``*.txt`` files without markers are treated as title-less
  abstracts, which also covers SemEval-style ``txt``/``key`` pairs;
* NUS-style directories: ``*.txt`` paired with ``*.kwd``.

Documents without any gold keyphrase are dropped.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import DatasetError
from .evaluation import BenchmarkDocument


def _split_gold(value) -> list[str]:
    if isinstance(value, str):
        parts = value.split(";")
    elif isinstance(value, (list, tuple)):
        parts = [str(v) for v in value]
    else:
        return []
    return [p.strip() for p in parts if p and p.strip()]


def _load_jsonl(path: Path) -> list[BenchmarkDocument]:
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}:{line_no}: not valid JSON: {exc}") from exc
            gold = []
            for field in ("keyword", "keywords", "keyphrases"):
                if field in record:
                    gold = _split_gold(record[field])
                    break
            doc = BenchmarkDocument(
                title=str(record.get("title", "")).strip(),
                abstract=str(record.get("abstract", record.get("text", ""))).strip(),
                gold_keyphrases=gold,
            )
            if doc.gold_keyphrases and (doc.title or doc.abstract):
                docs.append(doc)
    return docs


def _parse_marked_text(raw: str) -> tuple[str, str]:
    """Split ``--T``/``--A`` sections; fall back to the whole text."""
    if "--T" not in raw:
        return "", raw.strip()
    title_lines: list[str] = []
    abstract_lines: list[str] = []
    section = None
    for line in raw.splitlines():
        marker = line.strip()
        if marker == "--T":
            section = title_lines
            continue
        if marker == "--A":
            section = abstract_lines
            continue
        if marker == "--B":
            section = None
            continue
        if section is not None:
            section.append(line)
    return "\n".join(title_lines).strip(), "\n".join(abstract_lines).strip()


def _load_paired(directory: Path, text_ext: str, gold_ext: str,
                 gold_separator: str) -> list[BenchmarkDocument]:
    docs = []
    for text_file in sorted(directory.glob(f"*{text_ext}")):
        gold_file = text_file.with_suffix(gold_ext)
        if not gold_file.exists():
            continue
        raw = text_file.read_text("utf-8", errors="replace")
        gold_raw = gold_file.read_text("utf-8", errors="replace")
        if gold_separator == ";":
            gold = _split_gold(" ".join(gold_raw.split()))
        else:
            gold = [line.strip() for line in gold_raw.splitlines() if line.strip()]
        title, abstract = _parse_marked_text(raw)
        doc = BenchmarkDocument(title=title, abstract=abstract, gold_keyphrases=gold)
        if doc.gold_keyphrases and (doc.title or doc.abstract):
            docs.append(doc)
    return docs


def load_dataset(path) -> list[BenchmarkDocument]:
    """Load a benchmark dataset, auto-detecting its layout."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if path.is_file():
        return _load_jsonl(path)

    jsonl = sorted(list(path.glob("*.jsonl")) + list(path.glob("*.json")))
    if jsonl:
        docs = []
        for f in jsonl:
            docs.extend(_load_jsonl(f))
        return docs
    if any(path.glob("*.abstr")):
        return _load_paired(path, ".abstr", ".uncontr", ";")
    if any(path.glob("*.kwd")):
        return _load_paired(path, ".txt", ".kwd", "\n")
    if any(path.glob("*.key")):
        return _load_paired(path, ".txt", ".key", "\n")
    raise DatasetError(
        f"unrecognized dataset layout under {path}: expected *.jsonl/*.json, "
        "*.abstr/*.uncontr, *.txt/*.key, or *.txt/*.kwd files")

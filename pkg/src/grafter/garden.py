"""The garden: every plant reachable from an alphabet by iterated grafting.

Entries are graded by word length (``letters``), where each generator,
including the identity strand, is one letter.  A plant enters the garden at
the first length where some grafting produces it.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .errors import AlphabetMismatch, EmptyAlphabet, FormatError
from .grafting import graft_all
from .plant import Arity, Plant

FORMAT = "grafter-garden/1"


@dataclass(frozen=True)
class GardenEntry:
    plant: Plant
    letters: int
    graftings: int

    @property
    def code(self) -> bytes:
        return self.plant.code

    @property
    def arity(self) -> Arity:
        return self.plant.arity

    @property
    def vertices(self) -> int:
        return len(self.plant.labels)


class GardenStore:
    def __init__(self, alphabet_hash: str, max_letters: int, entries: Iterable[GardenEntry] = ()):
        self.alphabet_hash = alphabet_hash
        self.max_letters = max_letters
        self.entries: dict[bytes, GardenEntry] = {}
        for e in entries:
            self.insert(e)

    def insert(self, entry: GardenEntry) -> bool:
        """Add ``entry`` unless its code is already present; report whether it was new."""
        if entry.code in self.entries:
            return False
        self.entries[entry.code] = entry
        return True

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, p: Plant) -> bool:
        return p.code in self.entries

    def codes(self) -> list[bytes]:
        return sorted(self.entries)

    def sorted_entries(self) -> list[GardenEntry]:
        return [self.entries[c] for c in self.codes()]

    def level(self, letters: int) -> list[GardenEntry]:
        return [e for e in self.sorted_entries() if e.letters == letters]

    def filter(self, predicate: Callable[[GardenEntry], bool] | None = None, *,
               arity: Arity | tuple | None = None, letters: int | None = None,
               graftings: int | None = None) -> list[Plant]:
        out = []
        for e in self.sorted_entries():
            if arity is not None and tuple(e.arity) != tuple(arity):
                continue
            if letters is not None and e.letters != letters:
                continue
            if graftings is not None and e.graftings != graftings:
                continue
            if predicate is not None and not predicate(e):
                continue
            out.append(e.plant)
        return out

    def stats(self) -> dict:
        by_letters_arity = Counter((e.letters, str(e.arity)) for e in self.entries.values())
        by_graftings = Counter(e.graftings for e in self.entries.values())
        return {
            "total": len(self.entries),
            "by_letters_arity": {f"{k[0]}:{k[1]}": v for k, v in sorted(by_letters_arity.items())},
            "by_graftings": {str(k): v for k, v in sorted(by_graftings.items())},
        }

    # persistence
    def dumps(self) -> str:
        lines = [json.dumps({"format": FORMAT, "alphabet_hash": self.alphabet_hash,
                             "max_letters": self.max_letters}, sort_keys=True)]
        for e in self.sorted_entries():
            lines.append(json.dumps({"code": e.code.decode("ascii"), "arity": str(e.arity),
                                     "letters": e.letters, "graftings": e.graftings}, sort_keys=True))
        lines.append(json.dumps({"count": len(self.entries)}))
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path):
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str, alphabet=None) -> GardenStore:
        lines = text.splitlines()
        try:
            header = json.loads(lines[0])
            trailer = json.loads(lines[-1])
        except (IndexError, json.JSONDecodeError) as exc:
            raise FormatError("garden file is empty or malformed") from exc
        if header.get("format") != FORMAT:
            raise FormatError(f"unknown garden format {header.get('format')!r}")
        if set(trailer) != {"count"}:
            raise FormatError("garden file is truncated (no trailer record)")
        if alphabet is not None and header["alphabet_hash"] != alphabet.hash:
            raise AlphabetMismatch(
                f"garden was built for alphabet {header['alphabet_hash']}, not {alphabet.hash}")
        store = cls(header["alphabet_hash"], header["max_letters"])
        for line in lines[1:-1]:
            try:
                rec = json.loads(line)
                p = Plant.from_code(rec["code"])
                entry = GardenEntry(p.with_graftings(rec["graftings"]), rec["letters"], rec["graftings"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise FormatError(f"malformed garden record {line!r}") from exc
            if str(entry.arity) != rec["arity"]:
                raise FormatError(f"arity mismatch in record {line!r}")
            if not store.insert(entry):
                raise FormatError(f"duplicate code in garden file: {rec['code']}")
        if len(store) != trailer["count"]:
            raise FormatError(f"garden file lists {len(store)} records, trailer says {trailer['count']}")
        return store

    @classmethod
    def load(cls, path: str | Path, alphabet=None) -> GardenStore:
        return cls.loads(Path(path).read_text(encoding="utf-8"), alphabet)


def generate(alphabet, max_letters: int, threads: int = 1) -> GardenStore:
    """Close the generator plants under pairwise grafting up to ``max_letters`` letters."""
    if max_letters < 1:
        raise ValueError("max_letters must be at least 1")
    gens = alphabet.generator_plants()
    if not gens:
        raise EmptyAlphabet("the alphabet declares no generator plants")
    store = GardenStore(alphabet.hash, max_letters)
    levels: dict[int, list[GardenEntry]] = {1: []}
    for g in sorted(gens, key=lambda p: p.code):
        e = GardenEntry(g, 1, 0)
        if store.insert(e):
            levels[1].append(e)
    for total in range(2, max_letters + 1):
        pairs = []
        for i in range(1, total // 2 + 1):
            left, right = levels[i], levels[total - i]
            for x, a in enumerate(left):
                for y, b in enumerate(right):
                    if i == total - i and y < x:
                        continue
                    pairs.append((a, b))
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                results = list(pool.map(lambda ab: graft_all(ab[0].plant, ab[1].plant), pairs))
        else:
            results = [graft_all(a.plant, b.plant) for a, b in pairs]
        fresh = {}
        for grafted in results:
            for p in grafted:
                if p.code not in store.entries:
                    old = fresh.get(p.code)
                    if old is None or p.graftings < old.graftings:
                        fresh[p.code] = p
        levels[total] = []
        for code in sorted(fresh):
            e = GardenEntry(fresh[code], total, fresh[code].graftings)
            store.insert(e)
            levels[total].append(e)
    return store

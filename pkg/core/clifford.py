"""
Grupo de Clifford de um qubit (24 elementos, módulo fase global).

Cada elemento é guardado pela sua ação de conjugação sobre X e Z
(``C X C†`` e ``C Z C†``, com sinal) e por uma palavra de portas H/S que o
realiza. A multiplicação ``a * b`` corresponde ao produto de matrizes ``AB``
(``b`` aplicado primeiro).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

SignedPauli = Tuple[int, str]

# P * Q = phase * R, com phase em {1, 1j, -1, -1j}
_PAULI_PRODUCT: Dict[Tuple[str, str], Tuple[complex, str]] = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "Z"): (1j, "X"), ("Z", "X"): (1j, "Y"),
    ("Y", "X"): (-1j, "Z"), ("Z", "Y"): (-1j, "X"), ("X", "Z"): (-1j, "Y"),
}


def pauli_product(p: str, q: str) -> Tuple[complex, str]:
    return _PAULI_PRODUCT[(p, q)]


@dataclass(frozen=True)
class Clifford:
    """Elemento do grupo identificado pelas imagens de X e Z."""
    image_x: SignedPauli
    image_z: SignedPauli

    def conjugate(self, pauli: str) -> SignedPauli:
        """Devolve ``C P C†`` como (sinal, Pauli)."""
        if pauli == "I":
            return (1, "I")
        if pauli == "X":
            return self.image_x
        if pauli == "Z":
            return self.image_z
        # Y = i X Z
        (sx, px), (sz, pz) = self.image_x, self.image_z
        phase, p = pauli_product(px, pz)
        value = 1j * phase * sx * sz
        return (int(round(value.real)), p)

    def conjugate_signed(self, signed: SignedPauli) -> SignedPauli:
        sign, pauli = signed
        s, p = self.conjugate(pauli)
        return (sign * s, p)

    def __mul__(self, other: "Clifford") -> "Clifford":
        return Clifford(
            self.conjugate_signed(other.image_x),
            self.conjugate_signed(other.image_z),
        )

    @property
    def inverse(self) -> "Clifford":
        return _inverses()[self]

    @property
    def word(self) -> str:
        """Portas H/S em ordem temporal que realizam o elemento."""
        return _words()[self]

    @property
    def name(self) -> str:
        return NAMES.get(self, self.word or "I")

    def is_diagonal(self) -> bool:
        return self.image_z == (1, "Z")

    def to_json(self) -> str:
        return self.name


IDENTITY = Clifford((1, "X"), (1, "Z"))
HADAMARD = Clifford((1, "Z"), (1, "X"))
PHASE = Clifford((1, "Y"), (1, "Z"))           # S
PHASE_DAG = Clifford((-1, "Y"), (1, "Z"))      # S†
PAULI_X = Clifford((1, "X"), (-1, "Z"))
PAULI_Y = Clifford((-1, "X"), (-1, "Z"))
PAULI_Z = Clifford((-1, "X"), (1, "Z"))

NAMES: Dict[Clifford, str] = {
    IDENTITY: "I",
    HADAMARD: "H",
    PHASE: "S",
    PHASE_DAG: "Sdg",
    PAULI_X: "X",
    PAULI_Y: "Y",
    PAULI_Z: "Z",
}

GATES: Dict[str, Clifford] = {"H": HADAMARD, "S": PHASE}


def from_word(word: str) -> Clifford:
    """Elemento obtido aplicando as portas da palavra em ordem temporal."""
    element = IDENTITY
    for gate in word:
        element = GATES[gate] * element
    return element


@lru_cache(maxsize=None)
def _words() -> Dict[Clifford, str]:
    # busca em largura: palavras mais curtas primeiro, H antes de S
    words = {IDENTITY: ""}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for element in frontier:
            for gate in "HS":
                candidate = GATES[gate] * element
                if candidate not in words:
                    words[candidate] = words[element] + gate
                    nxt.append(candidate)
        frontier = nxt
    return words


def group_elements() -> List[Clifford]:
    """Os 24 elementos, na ordem da busca em largura."""
    return list(_words())


@lru_cache(maxsize=None)
def _inverses() -> Dict[Clifford, Clifford]:
    elements = group_elements()
    return {a: next(b for b in elements if a * b == IDENTITY) for a in elements}


@lru_cache(maxsize=None)
def composition_table() -> Tuple[Tuple[int, ...], ...]:
    """Tabela ``table[i][j] = índice de elements[i] * elements[j]``."""
    elements = group_elements()
    index = {e: i for i, e in enumerate(elements)}
    return tuple(tuple(index[a * b] for b in elements) for a in elements)

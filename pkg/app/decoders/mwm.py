# Decodificador de emparejamiento de peso mínimo (referencia)

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from app.qec.errors import NumericalInvariantError
from app.qec.lattice import SurfaceCodeLattice, Syndrome, canonical_error, classify_residual
from app.qec.noise import NoiseModel
from app.qec.pauli import PauliOperator, multiply

from .base import DecodeResult

logger = logging.getLogger(__name__)

DECODER_NAME = "mwm"

Node = Tuple[str, int]


class MatchingSide(str, Enum):
    X_ERRORS = "X_errors"
    Z_ERRORS = "Z_errors"


@dataclass
class DefectGraph:
    """Defectos de un lado, cada uno con su nodo de borde privado"""

    side: MatchingSide
    d: int
    real_nodes: List[Tuple[int, int]] = field(default_factory=list)
    graph: nx.Graph = field(default_factory=nx.Graph)

    @property
    def node_count(self) -> int:
        return self.graph.number_of_nodes()

    def weight(self, u: Node, v: Node) -> int:
        return int(self.graph[u][v]["weight"])


def _boundary_distance(side: MatchingSide, d: int, i: int, j: int) -> int:
    if side == MatchingSide.X_ERRORS:
        return min(j + 1, d - 1 - j)
    return min(i + 1, d - 1 - i)


def build_defect_graph(lat: SurfaceCodeLattice, s: Syndrome, side: MatchingSide) -> DefectGraph:
    d = lat.d
    side = MatchingSide(side)
    if side == MatchingSide.X_ERRORS:
        coords = [divmod(int(k), d - 1) for k in np.flatnonzero(s.site_bits)]
    else:
        coords = [divmod(int(k), d) for k in np.flatnonzero(s.plaquette_bits)]
    g = nx.Graph()
    for k, (i, j) in enumerate(coords):
        g.add_node(("real", k))
        g.add_node(("boundary", k))
        g.add_edge(("real", k), ("boundary", k), weight=_boundary_distance(side, d, i, j))
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            (i1, j1), (i2, j2) = coords[a], coords[b]
            g.add_edge(("real", a), ("real", b), weight=abs(i1 - i2) + abs(j1 - j2))
            g.add_edge(("boundary", a), ("boundary", b), weight=0)
    return DefectGraph(side=side, d=d, real_nodes=coords, graph=g)


def min_weight_perfect_matching(g: DefectGraph) -> List[Tuple[Node, Node]]:
    """Emparejamiento perfecto exacto de peso mínimo (blossom de networkx sobre pesos invertidos)"""
    if g.node_count % 2 != 0:
        raise NumericalInvariantError(f"Número impar de nodos en el grafo de defectos: {g.node_count}")
    if g.node_count == 0:
        return []
    top = max(w for _, _, w in g.graph.edges(data="weight")) + 1
    inverted = nx.Graph()
    inverted.add_nodes_from(g.graph.nodes)
    for u, v, w in g.graph.edges(data="weight"):
        inverted.add_edge(u, v, weight=top - w)
    matching = nx.max_weight_matching(inverted, maxcardinality=True)
    if 2 * len(matching) != g.node_count:
        raise NumericalInvariantError("El emparejamiento obtenido no es perfecto")
    return sorted((tuple(sorted(pair)) for pair in matching))


def matching_weight(g: DefectGraph, pairing: List[Tuple[Node, Node]]) -> int:
    return sum(g.weight(u, v) for u, v in pairing)


def _pair_path(lat: SurfaceCodeLattice, side: MatchingSide, a: Tuple[int, int], b: Tuple[int, int]) -> List[int]:
    # Escalera fija: primero a lo largo de la fila de a, luego por la columna de b
    (i1, j1), (i2, j2) = a, b
    edges = []
    for c in range(min(j1, j2), max(j1, j2)):
        edges.append(lat.h_edge(i1, c + 1) if side == MatchingSide.X_ERRORS else lat.v_edge(i1, c))
    for r in range(min(i1, i2), max(i1, i2)):
        edges.append(lat.v_edge(r, j2) if side == MatchingSide.X_ERRORS else lat.h_edge(r + 1, j2))
    return edges


def _boundary_path(lat: SurfaceCodeLattice, side: MatchingSide, a: Tuple[int, int]) -> List[int]:
    d = lat.d
    i, j = a
    if side == MatchingSide.X_ERRORS:
        if j + 1 <= d - 1 - j:
            return [lat.h_edge(i, c) for c in range(j + 1)]
        return [lat.h_edge(i, c) for c in range(j + 1, d)]
    if i + 1 <= d - 1 - i:
        return [lat.h_edge(r, j) for r in range(i + 1)]
    return [lat.h_edge(r, j) for r in range(i + 1, d)]


def _realize(lat: SurfaceCodeLattice, g: DefectGraph, pairing: List[Tuple[Node, Node]]) -> np.ndarray:
    bits = np.zeros(lat.n, dtype=np.uint8)
    for u, v in pairing:
        if u[0] == "real" and v[0] == "real":
            edges = _pair_path(lat, g.side, g.real_nodes[u[1]], g.real_nodes[v[1]])
        elif u[0] == "real" or v[0] == "real":
            real = u if u[0] == "real" else v
            edges = _boundary_path(lat, g.side, g.real_nodes[real[1]])
        else:
            continue
        for e in edges:
            bits[e] ^= 1
    return bits


def decode_mwm(lat: SurfaceCodeLattice, s: Syndrome) -> DecodeResult:
    """Emparejamiento independiente de los defectos X y Z"""
    x_graph = build_defect_graph(lat, s, MatchingSide.X_ERRORS)
    z_graph = build_defect_graph(lat, s, MatchingSide.Z_ERRORS)
    x_bits = _realize(lat, x_graph, min_weight_perfect_matching(x_graph))
    z_bits = _realize(lat, z_graph, min_weight_perfect_matching(z_graph))
    correction = PauliOperator(x_bits, z_bits)
    # Clase relativa a f(s), sólo informativa
    cls = classify_residual(lat, multiply(correction, canonical_error(lat, s)))
    return DecodeResult(logical_class=cls, correction=correction, decoder=DECODER_NAME)


class MWMDecoder:
    def __init__(self, lat: SurfaceCodeLattice):
        self.lat = lat

    def decode(self, s: Syndrome, noise: Optional[NoiseModel] = None) -> DecodeResult:
        return decode_mwm(self.lat, s)

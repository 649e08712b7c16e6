"""
Separadores planares balanceados (construcción clásica por niveles BFS y ciclo
fundamental sobre una triangulación) con atajo para grillas rectangulares.
"""
import logging
import math
from collections import deque

import networkx as nx
from networkx.algorithms.planar_drawing import triangulate_embedding

from config import settings
from src.models.graph import Separation

logger = logging.getLogger(__name__)

_CONTRACTED = -1   # vértice que representa los niveles <= l0 contraídos
_CYCLE_CANDIDATES = 8


# ==========================================
# 1. PUNTO DE ENTRADA
# ==========================================
def planar_separator(g, vertices=None):
    """
    Separación (A, S, B) del subgrafo inducido por `vertices` (todo el grafo si
    es None), con |A|, |B| <= αn y |S| <= β√n. Etiquetas originales.
    """
    vertices = set(range(g.n)) if vertices is None else set(vertices)
    n = len(vertices)
    if n == 0:
        return Separation(frozenset(), frozenset(), frozenset())

    fast = _grid_separator(g, vertices)
    if fast is not None:
        return fast

    sub = g.to_networkx().subgraph(vertices).copy()
    is_planar, _ = nx.check_planarity(sub)
    if not is_planar:
        raise ValueError("El grafo no es planar: no se puede construir el separador")

    alpha = settings.SEPARATOR_ALPHA
    components = sorted((set(c) for c in nx.connected_components(sub)), key=len, reverse=True)
    if len(components[0]) <= alpha * n:
        return _balance(_pieces(sub, set()), set(), alpha * n)

    separator = _component_separator(sub, components[0], n)
    return _balance(_pieces(sub, separator), separator, alpha * n)


def _pieces(graph, separator):
    rest = graph.subgraph([v for v in graph.nodes if v not in separator])
    return [set(c) for c in nx.connected_components(rest)]


def _balance(pieces, separator, limit):
    """Reparte las piezas en A y B en orden descendente sin pasar el límite en A."""
    a, b = set(), set()
    for piece in sorted(pieces, key=len, reverse=True):
        if len(a) + len(piece) <= limit:
            a |= piece
        else:
            b |= piece
    if len(b) > len(a):
        a, b = b, a
    return Separation(frozenset(a), frozenset(separator), frozenset(b))


# ==========================================
# 2. ATAJO PARA GRILLAS
# ==========================================
def _grid_separator(g, vertices):
    """Si `vertices` es un rectángulo completo de la grilla, corta por la mitad del lado largo."""
    if not g.grid:
        return None
    _, cols = g.grid
    rs = [v // cols for v in vertices]
    cs = [v % cols for v in vertices]
    r0, r1, c0, c1 = min(rs), max(rs), min(cs), max(cs)
    h, w = r1 - r0 + 1, c1 - c0 + 1
    if h * w != len(vertices):
        return None
    a, s, b = set(), set(), set()
    if w >= h:
        cut = c0 + w // 2
        for v in vertices:
            c = v % cols
            (a if c < cut else s if c == cut else b).add(v)
    else:
        cut = r0 + h // 2
        for v in vertices:
            r = v // cols
            (a if r < cut else s if r == cut else b).add(v)
    if len(b) > len(a):
        a, b = b, a
    return Separation(frozenset(a), frozenset(s), frozenset(b))


# ==========================================
# 3. COMPONENTE GRANDE: NIVELES BFS
# ==========================================
def _component_separator(sub, component, n_total):
    comp = sub.subgraph(component)
    n_c = len(component)
    v0 = min(component)

    level_of = {v0: 0}
    parent = {v0: None}
    levels = [[v0]]
    queue = deque([v0])
    while queue:
        v = queue.popleft()
        for w in sorted(comp.neighbors(v)):
            if w not in level_of:
                level_of[w] = level_of[v] + 1
                parent[w] = v
                if len(levels) <= level_of[w]:
                    levels.append([])
                levels[level_of[w]].append(w)
                queue.append(w)

    def size(l):
        return len(levels[l]) if 0 <= l < len(levels) else 0

    # nivel mediano l1
    acc, l1 = 0, 0
    for l1, lv in enumerate(levels):
        acc += len(lv)
        if acc >= n_c / 2:
            break
    k = acc

    if size(l1) <= 2 * math.sqrt(n_c):
        logger.debug(f"Separador por nivel {l1} (|L|={size(l1)})")
        return set(levels[l1])

    # l0 <= l1 y l2 > l1 según las desigualdades clásicas
    bound0 = 2 * math.sqrt(k)
    cands0 = [(size(l) + 2 * (l1 - l), -l) for l in range(l1, -2, -1)]
    ok0 = [l for l in range(l1, -2, -1) if size(l) + 2 * (l1 - l) <= bound0]
    l0 = ok0[0] if ok0 else -min(cands0)[1]

    bound2 = 2 * math.sqrt(max(n_c - k, 0))
    top = len(levels)
    cands2 = [(size(l) + 2 * (l - l1 - 1), l) for l in range(l1 + 1, top + 1)]
    ok2 = [l for l in range(l1 + 1, top + 1) if size(l) + 2 * (l - l1 - 1) <= bound2]
    l2 = ok2[0] if ok2 else min(cands2)[1]

    outer = set()
    for l in (l0, l2):
        if 0 <= l < len(levels):
            outer |= set(levels[l])

    middle = [v for l in range(l0 + 1, min(l2, top)) for v in levels[l]]
    if len(middle) <= settings.SEPARATOR_ALPHA * n_total:
        logger.debug(f"Separador por niveles {l0} y {l2}")
        return outer

    cycle = _cycle_separator(comp, sub, middle, level_of, parent, l0, v0, outer, n_total)
    if cycle is None:
        logger.warning(f"⚠️ Paso de ciclo sin candidato balanceado; se usa el nivel mediano {l1}")
        return set(levels[l1])
    return outer | cycle


# ==========================================
# 4. PASO DEL CICLO FUNDAMENTAL
# ==========================================
def _cycle_separator(comp, sub, middle, level_of, parent, l0, v0, outer, n_total):
    middle_set = set(middle)
    contracted = l0 >= 0
    root = _CONTRACTED if contracted else v0

    h = nx.Graph()
    h.add_nodes_from(middle)
    if contracted:
        h.add_node(_CONTRACTED)
    for u, w in comp.edges(middle):
        u_in, w_in = u in middle_set, w in middle_set
        if u_in and w_in:
            h.add_edge(u, w)
        elif contracted and (u_in or w_in):
            other = w if u_in else u
            if level_of[other] <= l0:
                h.add_edge(u if u_in else w, _CONTRACTED)

    tree_parent = {root: None}
    for v in middle:
        if v == root:
            continue
        p = parent[v]
        tree_parent[v] = _CONTRACTED if (contracted and level_of[p] <= l0) else p

    big_n = h.number_of_nodes()
    if big_n < 3:
        return None

    _, emb = nx.check_planarity(h)
    tri, _ = triangulate_embedding(emb, fully_triangulate=True)

    depth = {}
    for v in tree_parent:
        d, u = 0, v
        while tree_parent[u] is not None:
            u = tree_parent[u]
            d += 1
        depth[v] = d
    tree_edges = {frozenset((v, p)) for v, p in tree_parent.items() if p is not None}

    # caras: cada semiarista pertenece a una
    face_of = {}
    n_faces = 0
    for start in tri.edges():
        if start in face_of:
            continue
        half = start
        while half not in face_of:
            face_of[half] = n_faces
            half = tri.next_face_half_edge(*half)
        n_faces += 1

    # árbol dual sobre las aristas que no están en el árbol BFS
    dual = [[] for _ in range(n_faces)]
    for u, w in tri.edges():
        if u < w and frozenset((u, w)) not in tree_edges:
            f1, f2 = face_of[(u, w)], face_of[(w, u)]
            if f1 != f2:
                dual[f1].append((f2, (u, w)))
                dual[f2].append((f1, (u, w)))

    root_face = face_of[(root, next(iter(tri.neighbors(root))))]
    dual_parent = {root_face: None}
    order = [root_face]
    queue = deque([root_face])
    while queue:
        f = queue.popleft()
        for g_face, edge in dual[f]:
            if g_face not in dual_parent:
                dual_parent[g_face] = edge
                order.append(g_face)
                queue.append(g_face)
    sub_faces = {f: 1 for f in order}
    parent_face = {root_face: None}
    for f in order[1:]:
        u, w = dual_parent[f]
        f1, f2 = face_of[(u, w)], face_of[(w, u)]
        parent_face[f] = f2 if f1 == f else f1
    for f in reversed(order[1:]):
        sub_faces[parent_face[f]] += sub_faces[f]

    def fundamental_cycle(u, w):
        a, b = u, w
        left, right = [a], [b]
        while depth[a] > depth[b]:
            a = tree_parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = tree_parent[b]
            right.append(b)
        while a != b:
            a, b = tree_parent[a], tree_parent[b]
            left.append(a)
            right.append(b)
        return left + right[:-1][::-1]

    scored = []
    for f in order[1:]:
        u, w = dual_parent[f]
        cycle = fundamental_cycle(u, w)
        c = len(cycle)
        inside = (sub_faces[f] - c + 2) // 2
        outside = big_n - c - inside - (1 if contracted and _CONTRACTED not in cycle else 0)
        scored.append((max(inside, outside), len(scored), cycle))
    scored.sort(key=lambda item: (item[0], item[1]))

    limit = settings.SEPARATOR_ALPHA * n_total
    for _, _, cycle in scored[:_CYCLE_CANDIDATES]:
        candidate = {v for v in cycle if v != _CONTRACTED}
        pieces = _pieces(sub, outer | candidate)
        if max((len(p) for p in pieces), default=0) <= limit:
            logger.debug(f"Separador por ciclo de {len(candidate)} vértices")
            return candidate
    return None

"""
Descomposiciones en árbol: validación, normas, forma "nice", compresión,
preimágenes por coarse-graining y construcción recursiva por separadores.
"""
import logging
import math

from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

from config import settings
from src.models.tree_decomposition import NodeKind, TdDiagnostics, TdNode, TreeDecomposition
from src.services.separator_service import planar_separator

logger = logging.getLogger(__name__)


def base_case_size(alpha=None, beta=None):
    """n0 = ceil(β² / (1-α)²); 72 con los valores por defecto."""
    alpha = settings.SEPARATOR_ALPHA if alpha is None else alpha
    beta = settings.SEPARATOR_BETA if beta is None else beta
    # redondeo previo: 8 / (1/9) no da exactamente 72 en punto flotante
    return math.ceil(round(beta ** 2 / (1 - alpha) ** 2, 9))


# ==========================================
# 1. VALIDACIÓN Y MÉTRICAS
# ==========================================
def validate_td(g, t):
    """Diagnóstico de las tres propiedades y, si hay tipos, de las reglas nice."""
    diag = TdDiagnostics(width=t.width)
    if not t.nodes:
        diag.structure_errors.append("descomposición sin nodos")
        return diag

    seen, stack = set(), [t.root]
    while stack:
        i = stack.pop()
        if i in seen:
            diag.structure_errors.append(f"el nodo {i} tiene más de un padre")
            return diag
        seen.add(i)
        for c in t.nodes[i].children:
            if not 0 <= c < len(t.nodes):
                diag.structure_errors.append(f"hijo {c} fuera de rango en el nodo {i}")
                return diag
            stack.append(c)
    if len(seen) != len(t.nodes):
        diag.structure_errors.append(f"{len(t.nodes) - len(seen)} nodos no alcanzables desde la raíz")

    covered = set()
    for node in t.nodes:
        covered |= node.bag
    diag.missing_vertices = [v for v in range(g.n) if v not in covered]
    stray = sorted(v for v in covered if not 0 <= v < g.n)
    if stray:
        diag.structure_errors.append(f"vértices inexistentes en bolsas: {stray[:5]}")

    bag_sets = [node.bag for node in t.nodes]
    diag.uncovered_edges = [(u, v) for u, v in g.edges()
                            if not any(u in bag and v in bag for bag in bag_sets)]

    # cada vértice debe tener exactamente un nodo "tope" (su padre no lo contiene)
    parent = t.parents()
    tops = {}
    for i in seen:
        up = parent.get(i)
        for v in t.nodes[i].bag:
            if up is None or v not in t.nodes[up].bag:
                tops[v] = tops.get(v, 0) + 1
    diag.disconnected_vertices = sorted(v for v, count in tops.items() if count > 1)

    for i in seen:
        node = t.nodes[i]
        if node.kind is None:
            continue
        error = _kind_error(t, node)
        if error:
            diag.kind_errors.append(f"nodo {i}: {error}")
    return diag


def _kind_error(t, node):
    child_bags = [t.nodes[c].bag for c in node.children]
    if node.kind == NodeKind.INTRODUCE:
        if len(child_bags) > 1:
            return "introduce con más de un hijo"
        if child_bags and not node.bag > child_bags[0]:
            return "introduce debe agregar vértices"
    elif node.kind == NodeKind.FORGET:
        if len(child_bags) != 1:
            return "forget necesita exactamente un hijo"
        if not node.bag < child_bags[0]:
            return "forget debe quitar vértices"
    elif node.kind == NodeKind.MERGE:
        if len(child_bags) != 2:
            return "merge necesita exactamente dos hijos"
        if node.bag != child_bags[0] | child_bags[1]:
            return "la bolsa de merge debe ser la unión de las de sus hijos"
    return None


def ensure_valid(g, t, context="descomposición"):
    diag = validate_td(g, t)
    if not diag.valid:
        raise ValueError(f"{context} inválida: {diag.summary()}")
    return diag


def norm_p(t, p):
    """Norma p del vector de tamaños de bolsa; p = inf da el máximo."""
    if p < 1:
        raise ValueError(f"La norma requiere p >= 1 (llegó {p})")
    sizes = [len(node.bag) for node in t.nodes]
    if not sizes:
        return 0.0
    if math.isinf(p):
        return float(max(sizes))
    return sum(s ** p for s in sizes) ** (1.0 / p)


def td_stats(t):
    kinds = {kind.value: 0 for kind in NodeKind}
    for node in t.nodes:
        if node.kind is not None:
            kinds[node.kind.value] += 1
    return {
        'nodes': len(t.nodes),
        'width': t.width,
        'norm_1': int(sum(len(node.bag) for node in t.nodes)),
        'norm_2_sq': int(sum(len(node.bag) ** 2 for node in t.nodes)),
        'kinds': kinds,
    }


def width_bound(n, u_size, alpha=None, beta=None):
    """
    Cota de bolsa de compute_td: |U| + n0 + suma de β√n_j a lo largo de la
    sucesión de peor caso n_{j+1} = α n_j + β √n_j, hasta caer en el caso base.
    """
    alpha = settings.SEPARATOR_ALPHA if alpha is None else alpha
    beta = settings.SEPARATOR_BETA if beta is None else beta
    n0 = base_case_size(alpha, beta)
    total, size = 0.0, float(n)
    # el punto fijo de la sucesión es n0: se corta a menos de un vértice de él
    while size >= n0 + 1:
        total += beta * math.sqrt(size)
        size = alpha * size + beta * math.sqrt(size)
    return u_size + n0 + total


# ==========================================
# 2. TRANSFORMACIONES
# ==========================================
def contract_redundant(t):
    """Contrae cada arista cuya bolsa de un extremo contiene a la del otro."""
    nodes = []
    new_root = None
    stack = [(t.root, None)]
    while stack:
        i, new_parent = stack.pop()
        bag = t.nodes[i].bag
        pending = list(t.nodes[i].children)
        kept = []
        while pending:
            c = pending.pop()
            child_bag = t.nodes[c].bag
            if child_bag <= bag:
                pending.extend(t.nodes[c].children)
            elif bag <= child_bag:
                bag = child_bag
                pending.extend(t.nodes[c].children)
                pending.extend(kept)
                kept = []
            else:
                kept.append(c)
        idx = len(nodes)
        nodes.append(TdNode(bag, []))
        if new_parent is None:
            new_root = idx
        else:
            nodes[new_parent].children.append(idx)
        for c in reversed(kept):
            stack.append((c, idx))
    return TreeDecomposition(nodes, new_root)


def to_nice_form(t):
    """Cada nodo queda como introduce, forget o merge; la raíz queda vacía."""
    nodes = []

    def add(bag, children, kind):
        nodes.append(TdNode(bag, children, kind))
        return len(nodes) - 1

    built = {}
    for i in t.post_order():
        bag = t.nodes[i].bag
        parts = []
        for c in t.nodes[i].children:
            top, top_bag = built[c]
            keep = top_bag & bag
            if keep != top_bag:
                top = add(keep, [top], NodeKind.FORGET)
            parts.append((top, keep))
        if not parts:
            built[i] = (add(bag, [], NodeKind.INTRODUCE), bag)
            continue
        top, top_bag = parts[0]
        for other, other_bag in parts[1:]:
            top_bag = top_bag | other_bag
            top = add(top_bag, [top, other], NodeKind.MERGE)
        if top_bag != bag:
            top = add(bag, [top], NodeKind.INTRODUCE)
        built[i] = (top, bag)

    root, root_bag = built[t.root]
    if root_bag:
        root = add(frozenset(), [root], NodeKind.FORGET)
    return TreeDecomposition(nodes, root)


def compress(t, width_t):
    """
    Absorbe hijos en su padre mientras la unión no pase de 2(t+1) vértices.
    El resultado no es nice; normalize lo vuelve a convertir.
    """
    limit = 2 * (max(int(width_t), 1) + 1)
    nodes = []
    new_root = None
    stack = [(t.root, None)]
    while stack:
        i, new_parent = stack.pop()
        bag = t.nodes[i].bag
        pending = list(t.nodes[i].children)
        kept = []
        while pending:
            c = pending.pop()
            child_bag = t.nodes[c].bag
            if len(bag | child_bag) <= limit:
                bag = bag | child_bag
                pending.extend(t.nodes[c].children)
            else:
                kept.append(c)
        idx = len(nodes)
        nodes.append(TdNode(bag, []))
        if new_parent is None:
            new_root = idx
        else:
            nodes[new_parent].children.append(idx)
        for c in reversed(kept):
            stack.append((c, idx))
    return TreeDecomposition(nodes, new_root)


def normalize(t):
    """contract_redundant -> nice -> compress -> nice, con raíz vacía."""
    width = t.width
    out = contract_redundant(t)
    out = to_nice_form(out)
    out = compress(out, width)
    out = to_nice_form(out)
    logger.debug(f"TD normalizada: {len(t)} -> {len(out)} nodos, ancho {width} -> {out.width}")
    return out


def preimage(t, cg, source=None, target=None):
    """
    Reemplaza cada bolsa por su preimagen; los tipos se descartan. Con
    `source` (G') y `target` se verifica antes que el mapa sea un
    coarse-graining: ValueError si no lo es.
    """
    if source is not None:
        if target is None:
            raise ValueError("Para validar el coarse-graining hace falta el grafo destino")
        cg.validate(source, target)
    return TreeDecomposition(
        [TdNode(frozenset(cg.preimage(node.bag)), list(node.children)) for node in t.nodes], t.root)


# ==========================================
# 3. CONSTRUCCIÓN
# ==========================================
def compute_td(g, u=frozenset()):
    """
    TD nice con bolsa raíz U, por separadores planares recursivos.
    Caso base: |V| <= n0 da una hoja con todo V.
    """
    u = frozenset(u)
    if any(v < 0 or v >= g.n for v in u):
        raise IndexError(f"U contiene vértices fuera de rango (n={g.n})")
    if not g.grid and not g.is_planar():
        raise ValueError("compute_td requiere un grafo planar")
    n0 = base_case_size()
    nodes = []

    def add(bag, children, kind):
        nodes.append(TdNode(bag, children, kind))
        return len(nodes) - 1

    def leaf(vertices, boundary):
        top = add(vertices, [], NodeKind.INTRODUCE)
        if boundary != vertices:
            top = add(boundary, [top], NodeKind.FORGET)
        return top

    def rec(vertices, boundary):
        if len(vertices) <= n0:
            return leaf(vertices, boundary)
        sep = planar_separator(g, vertices)
        side_a = sep.a | sep.s
        side_b = sep.b | sep.s
        if side_a == vertices or side_b == vertices:
            logger.warning(f"⚠️ Separador sin progreso en {len(vertices)} vértices; hoja completa")
            return leaf(vertices, boundary)
        left = rec(side_a, sep.s | (sep.a & boundary))
        right = rec(side_b, sep.s | (sep.b & boundary))
        top = add(sep.s | boundary, [left, right], NodeKind.MERGE)
        if not sep.s <= boundary:
            top = add(boundary, [top], NodeKind.FORGET)
        return top

    root = rec(frozenset(range(g.n)), u)
    t = TreeDecomposition(nodes, root)
    logger.debug(f"compute_td: n={g.n}, |U|={len(u)}, nodos={len(t)}, ancho={t.width}")
    return t


def td_from_elimination(g, order):
    """TD a partir de un orden de eliminación: bolsa {v} ∪ vecinos posteriores en el grafo relleno."""
    order = list(order)
    if sorted(order) != list(range(g.n)):
        raise ValueError("El orden de eliminación debe ser una permutación de los vértices")
    position = {v: i for i, v in enumerate(order)}
    adj = [set(s) for s in g.adj]
    bags, parent = {}, {}
    for v in order:
        later = {w for w in adj[v] if position[w] > position[v]}
        bags[v] = frozenset(later | {v})
        for a in later:
            adj[a] |= later - {a}
        parent[v] = min(later, key=position.get) if later else None

    nodes = [TdNode(bags[v]) for v in order]
    index = {v: i for i, v in enumerate(order)}
    roots = []
    for v in order:
        if parent[v] is None:
            roots.append(index[v])
        else:
            nodes[index[parent[v]]].children.append(index[v])
    nodes.append(TdNode(frozenset(), roots))
    return TreeDecomposition(nodes, len(nodes) - 1)


def heuristic_td(g, method='planar'):
    """TD por método: trivial, min_degree, min_fill o planar (separadores)."""
    if method == 'trivial':
        return TreeDecomposition.single_bag(range(g.n))
    if method == 'planar':
        return compute_td(g)
    if method not in ('min_degree', 'min_fill'):
        raise ValueError(f"Método de descomposición desconocido: '{method}'")
    if g.n == 0:
        return TreeDecomposition.single_bag(())
    heuristic = treewidth_min_degree if method == 'min_degree' else treewidth_min_fill_in
    _, tree = heuristic(g.to_networkx())
    return _from_bag_tree(tree)


def default_method(g):
    return 'planar' if g.is_planar() else 'min_fill'


def _from_bag_tree(tree):
    """Convierte el árbol de frozensets de networkx en TreeDecomposition."""
    bags = list(tree.nodes())
    index = {bag: i for i, bag in enumerate(bags)}
    nodes = [TdNode(bag) for bag in bags]
    root = 0
    seen, stack = {root}, [root]
    while stack:
        i = stack.pop()
        for nb in tree.neighbors(bags[i]):
            j = index[nb]
            if j not in seen:
                seen.add(j)
                nodes[i].children.append(j)
                stack.append(j)
    return TreeDecomposition(nodes, root)

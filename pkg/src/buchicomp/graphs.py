"""Small graph toolkit shared by the decision procedures.

Everything works on finite directed graphs given as a node iterable plus a
successor function; nodes only need to be hashable.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, TypeVar

Node = TypeVar("Node", bound=Hashable)


def strongly_connected_components(
    nodes: Iterable[Node], successors: Callable[[Node], Iterable[Node]]
) -> list[list[Node]]:
    """Iterative Tarjan. Components come out in reverse topological order,
    i.e. a component is emitted before every component that can reach it."""
    index: dict[Node, int] = {}
    low: dict[Node, int] = {}
    on_stack: set[Node] = set()
    stack: list[Node] = []
    comps: list[list[Node]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work: list[tuple[Node, Iterable[Node]]] = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            descended = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    descended = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if work and low[v] < low[work[-1][0]]:
                low[work[-1][0]] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def good_components(
    nodes: Iterable[Node],
    successors: Callable[[Node], Iterable[Node]],
    is_base: Callable[[list[Node], bool], bool],
) -> set[Node]:
    """Nodes from which a "base" component is reachable.

    ``is_base(component, has_cycle)`` decides whether a strongly connected
    component itself qualifies; the returned set additionally contains every
    node with a path into a qualifying component.
    """
    node_list = list(nodes)
    good: set[Node] = set()
    for comp in strongly_connected_components(node_list, successors):
        has_cycle = len(comp) > 1 or comp[0] in successors(comp[0])
        if is_base(comp, has_cycle) or any(
            s in good for v in comp for s in successors(v)
        ):
            good.update(comp)
    return good


def nodes_on_or_reaching_cycles(
    nodes: Iterable[Node], successors: Callable[[Node], Iterable[Node]]
) -> set[Node]:
    """Nodes with infinitely many descendants: those that can reach a cycle."""
    return good_components(nodes, successors, lambda comp, cyc: cyc)


def has_cycle(nodes: Iterable[Node], successors: Callable[[Node], Iterable[Node]]) -> bool:
    for comp in strongly_connected_components(list(nodes), successors):
        if len(comp) > 1 or comp[0] in successors(comp[0]):
            return True
    return False

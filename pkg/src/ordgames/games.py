"""Two-player games on finite well-founded B-trees, solved exactly.

Player I picks a tree label extending the current node together with a
subspace from a finite list; Player II replies with a compact set from a
finite list.  Play ends at a maximal tree node; Player II wins exactly the
terminal histories in the payoff set.  The payoff set is either an explicit
table of terminal histories or the weighted functional payoff ("szlenk"):
a terminal history is winning for II if some functional x* from the model
and some selection x_i from each ball/subspace/compact intersection achieve

    sum_i  weight(node prefix of length i) * x*(x_i)  >=  epsilon.

Everything is exact: vectors and payoffs are rationals, and the solver runs
the backward-induction recursion over the set W of first moves all of whose
replies lose for II.  Tie-breaks are deterministic (lexicographically least
move), so solver output is reproducible byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple, Union

from .btree import FiniteBTree, NodePath, path_to_text
from .families import TruncationBudget, gamma_family
from .ordinal import Ordinal

__all__ = [
    "ModelSpace",
    "GameSpec",
    "Strategy",
    "ExtractedCollections",
    "PAYOFF_SZLENK",
    "eval_payoff",
    "solve",
    "verify_strategy",
    "brute_force_winner",
    "complete_substrategy",
    "extract_collections",
    "build_szlenk_game",
    "game_position_count",
    "game_to_json",
    "game_from_json",
    "strategy_to_json",
    "strategy_from_json",
    "collections_to_json",
    "history_to_text",
    "history_from_text",
]

PAYOFF_SZLENK = "szlenk"

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]
Move = Tuple[Ordinal, int, int]
History = Tuple[Move, ...]
Offer = Tuple[Ordinal, int]
ZDHistory = Tuple[Offer, ...]


def _dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _zproj(history: History) -> NodePath:
    return tuple(move[0] for move in history)


class ModelSpace:
    """A finite-dimensional rational model of the game's move alphabets.

    ``subspaces`` lists constraint matrices (x lies in subspace i iff
    M_i x = 0; an empty matrix is the whole space), ``compacts`` lists finite
    point sets, ``functionals`` the available covectors, and ``norm`` fixes
    the unit ball ("max" or "sum").  All scalars are exact rationals.
    """

    __slots__ = ("dim", "subspaces", "compacts", "functionals", "epsilon", "norm")

    def __init__(self, dim, subspaces, compacts, functionals, epsilon, norm="max"):
        dim = int(dim)
        if dim < 1:
            raise ValueError("dim must be positive")
        vec = lambda entries: self._vector(entries, dim)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(
            self, "subspaces", tuple(tuple(vec(row) for row in m) for m in subspaces)
        )
        object.__setattr__(
            self, "compacts", tuple(tuple(vec(x) for x in c) for c in compacts)
        )
        object.__setattr__(self, "functionals", tuple(vec(f) for f in functionals))
        object.__setattr__(self, "epsilon", Fraction(epsilon))
        object.__setattr__(self, "norm", norm)
        if not self.subspaces or not self.compacts:
            raise ValueError("move alphabets must be non-empty")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if norm not in ("max", "sum"):
            raise ValueError(f"unknown norm {norm!r}")

    @staticmethod
    def _vector(entries, dim) -> Vector:
        v = tuple(Fraction(x) for x in entries)
        if len(v) != dim:
            raise ValueError(f"vector of length {len(v)}, expected {dim}")
        return v

    def __setattr__(self, name, value):
        raise AttributeError("ModelSpace is immutable")

    def __eq__(self, other):
        return isinstance(other, ModelSpace) and all(
            getattr(self, f) == getattr(other, f) for f in self.__slots__
        )

    def __repr__(self):
        return (
            f"ModelSpace(dim={self.dim}, |D|={len(self.subspaces)}, "
            f"|K|={len(self.compacts)}, eps={self.epsilon})"
        )

    def norm_value(self, x: Vector) -> Fraction:
        if self.norm == "max":
            return max(abs(c) for c in x)
        return sum((abs(c) for c in x), Fraction(0))

    def in_subspace(self, index: int, x: Vector) -> bool:
        return all(_dot(row, x) == 0 for row in self.subspaces[index])

    def selection_set(self, z_index: int, c_index: int) -> Tuple[Vector, ...]:
        """Points of compact c that lie in subspace z and in the unit ball."""
        return tuple(
            x
            for x in self.compacts[c_index]
            if self.norm_value(x) <= 1 and self.in_subspace(z_index, x)
        )


class GameSpec:
    """A game: tree, move alphabets, node weights and a payoff set."""

    __slots__ = ("tree", "model", "weights", "payoff")

    def __init__(
        self,
        tree: FiniteBTree,
        model: ModelSpace,
        weights: Dict[NodePath, Fraction],
        payoff: Union[str, FrozenSet[History]],
    ):
        if not len(tree) or not tree.validate():
            raise ValueError("tree must be a non-empty valid B-tree")
        weights = {tuple(k): Fraction(v) for k, v in weights.items()}
        for node in tree.nodes:
            w = weights.get(node)
            if w is None:
                raise ValueError(f"no weight for node {path_to_text(node)}")
            if not 0 <= w <= 1:
                raise ValueError(f"weight {w} outside [0, 1]")
        if payoff != PAYOFF_SZLENK:
            payoff = frozenset(tuple(tuple(m) for m in h) for h in payoff)
            for h in payoff:
                node = _zproj(h)
                if node not in tree or not tree.is_max(node):
                    raise ValueError("payoff table entry is not a maximal history")
                if not all(
                    0 <= z < len(model.subspaces) and 0 <= c < len(model.compacts)
                    for _, z, c in h
                ):
                    raise ValueError("payoff table entry uses an illegal move index")
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "payoff", payoff)

    def __setattr__(self, name, value):
        raise AttributeError("GameSpec is immutable")

    def __eq__(self, other):
        return isinstance(other, GameSpec) and all(
            getattr(self, f) == getattr(other, f) for f in self.__slots__
        )

    @property
    def n_subspaces(self) -> int:
        return len(self.model.subspaces)

    @property
    def n_compacts(self) -> int:
        return len(self.model.compacts)

    def prefix_weights(self, node: NodePath) -> List[Fraction]:
        return [self.weights[node[: i + 1]] for i in range(len(node))]


@dataclass
class Strategy:
    """A decision rule for one player.

    For Player I, ``moves`` maps histories (after II's reply, or the empty
    history) to (label, subspace index).  For Player II it maps pairs
    (history, offered (label, subspace index)) to a compact index.
    """

    player: str
    moves: dict

    def __post_init__(self):
        if self.player not in ("I", "II"):
            raise ValueError(f"unknown player {self.player!r}")


class ExtractedCollections(NamedTuple):
    """Witness collections pulled out of a winning strategy for Player II.

    ``compact_choices`` assigns a compact index to every (label, subspace)
    history; ``functionals`` realizes the payoff at every maximal history t;
    ``selections[(s, t)]`` is the vector used at prefix s on the way to t.
    """

    compact_choices: Dict[ZDHistory, int]
    functionals: Dict[ZDHistory, Vector]
    selections: Dict[Tuple[ZDHistory, ZDHistory], Vector]


# -- payoff ------------------------------------------------------------------


def _best_functional_value(game: GameSpec, leaf: History, sets) -> Optional[Fraction]:
    """max over x* of sum_i w_i * max_{x in S_i} x*(x); None if no functionals.

    Valid because the weights are nonnegative, so each factor maximizes
    independently for a fixed functional.
    """
    weights = game.prefix_weights(_zproj(leaf))
    best = None
    for xstar in game.model.functionals:
        value = sum(
            (w * max(_dot(xstar, x) for x in s) for w, s in zip(weights, sets)),
            Fraction(0),
        )
        if best is None or value > best:
            best = value
    return best


def eval_payoff(game: GameSpec, leaf: History) -> bool:
    """Does the terminal history belong to the payoff set?"""
    leaf = tuple(tuple(m) for m in leaf)
    node = _zproj(leaf)
    if node not in game.tree or not game.tree.is_max(node):
        raise ValueError(f"{path_to_text(node)} is not maximal")
    if game.payoff != PAYOFF_SZLENK:
        return leaf in game.payoff
    sets = [game.model.selection_set(z, c) for _, z, c in leaf]
    if any(not s for s in sets):
        return False
    best = _best_functional_value(game, leaf, sets)
    return best is not None and best >= game.model.epsilon


# -- solving -----------------------------------------------------------------


def _offers(game: GameSpec, node: NodePath) -> List[Offer]:
    return [
        (zeta, zi)
        for zeta in game.tree.children_labels(node)
        for zi in range(game.n_subspaces)
    ]


def solve(game: GameSpec) -> Tuple[str, Strategy]:
    """Determine the winner and a winning strategy.

    Player I wins at a position iff some offer (label, subspace) leaves
    every compact reply losing for II; the returned strategy follows the
    lexicographically least such offer, and for II the least winning reply.
    """
    tree = game.tree
    n_compacts = game.n_compacts
    i_moves: Dict[History, Offer] = {}
    ii_moves: Dict[Tuple[History, Offer], int] = {}

    def first_player_wins(history: History, node: NodePath) -> bool:
        replies: List[Tuple[Offer, int]] = []
        for offer in _offers(game, node):
            zeta, zi = offer
            child = node + (zeta,)
            terminal = tree.is_max(child)
            reply = None
            for ci in range(n_compacts):
                extended = history + ((zeta, zi, ci),)
                if terminal:
                    branch_won = not eval_payoff(game, extended)
                else:
                    branch_won = first_player_wins(extended, child)
                if not branch_won:
                    reply = ci
                    break
            if reply is None:
                i_moves[history] = offer
                return True
            replies.append((offer, reply))
        for offer, ci in replies:
            ii_moves[(history, offer)] = ci
        return False

    if first_player_wins((), ()):
        return "I", _prune_to_reachable(game, Strategy("I", i_moves))
    return "II", _prune_to_reachable(game, Strategy("II", ii_moves))


def _prune_to_reachable(game: GameSpec, strategy: Strategy) -> Strategy:
    # drop prescriptions at positions the recursion explored but the final
    # strategy never reaches
    tree = game.tree
    moves: dict = {}

    def walk_i(history: History, node: NodePath) -> None:
        move = strategy.moves[history]
        moves[history] = move
        zeta, zi = move
        child = node + (zeta,)
        if tree.is_max(child):
            return
        for ci in range(game.n_compacts):
            walk_i(history + ((zeta, zi, ci),), child)

    def walk_ii(history: History, node: NodePath) -> None:
        for offer in _offers(game, node):
            zeta, zi = offer
            ci = strategy.moves[(history, offer)]
            moves[(history, offer)] = ci
            child = node + (zeta,)
            if not tree.is_max(child):
                walk_ii(history + ((zeta, zi, ci),), child)

    if strategy.player == "I":
        walk_i((), ())
    else:
        walk_ii((), ())
    return Strategy(strategy.player, moves)


def verify_strategy(game: GameSpec, strategy: Strategy) -> bool:
    """Exhaustively play every admissible playout; True iff all favor the owner."""
    tree = game.tree

    if strategy.player == "I":

        def check_i(history: History, node: NodePath) -> bool:
            move = strategy.moves.get(history)
            if move is None:
                return False
            zeta, zi = move
            child = node + (zeta,)
            if child not in tree or not 0 <= zi < game.n_subspaces:
                return False
            for ci in range(game.n_compacts):
                extended = history + ((zeta, zi, ci),)
                if tree.is_max(child):
                    if eval_payoff(game, extended):
                        return False
                elif not check_i(extended, child):
                    return False
            return True

        return check_i((), ())

    def check_ii(history: History, node: NodePath) -> bool:
        for offer in _offers(game, node):
            zeta, zi = offer
            child = node + (zeta,)
            ci = strategy.moves.get((history, offer))
            if ci is None or not 0 <= ci < game.n_compacts:
                return False
            extended = history + ((zeta, zi, ci),)
            if tree.is_max(child):
                if not eval_payoff(game, extended):
                    return False
            elif not check_ii(extended, child):
                return False
        return True

    return check_ii((), ())


def game_position_count(game: GameSpec) -> int:
    """Number of move histories in the full product tree."""
    per_move = game.n_subspaces * game.n_compacts
    return sum(per_move ** len(node) for node in game.tree.nodes)


def brute_force_winner(game: GameSpec, max_positions: int = 10**6) -> str:
    """Naive exists/forall alternation over the full product tree."""
    count = game_position_count(game)
    if count > max_positions:
        raise ValueError(f"game has {count} positions, above the {max_positions} cap")
    tree = game.tree

    def won(history: History, node: NodePath) -> bool:
        return any(
            all(
                (
                    not eval_payoff(game, history + ((zeta, zi, ci),))
                    if tree.is_max(node + (zeta,))
                    else won(history + ((zeta, zi, ci),), node + (zeta,))
                )
                for ci in range(game.n_compacts)
            )
            for zeta in tree.children_labels(node)
            for zi in range(game.n_subspaces)
        )

    return "I" if won((), ()) else "II"


# -- substrategy completion ----------------------------------------------------


def complete_substrategy(game: GameSpec, sub: Strategy, fallback_z: int) -> Strategy:
    """Extend a Player-I substrategy to a total strategy.

    Off the substrategy's domain the completion plays the least legal label
    with the fixed fallback subspace.  The substrategy must prescribe a legal
    root move, stay inside the non-maximal product tree, prescribe only legal
    moves, and cover every position reachable by following its own
    prescriptions (an already-total strategy therefore passes unchanged).
    """
    if sub.player != "I":
        raise ValueError("substrategy completion is for Player I")
    tree = game.tree
    if not 0 <= fallback_z < game.n_subspaces:
        raise ValueError("fallback subspace index out of range")
    moves = {tuple(k): tuple(v) for k, v in sub.moves.items()}
    first = moves.get(())
    if first is None:
        raise ValueError("substrategy must prescribe the empty position")
    zeta0, z0 = first
    if (zeta0,) not in tree:
        raise ValueError("first move label is not a root of the tree")
    if not 0 <= z0 < game.n_subspaces:
        raise ValueError("first move subspace index out of range")
    for history, (zeta, zi) in moves.items():
        node = _zproj(history)
        if history:
            if node not in tree or tree.is_max(node):
                raise ValueError("substrategy domain leaves the non-maximal tree")
            if not all(
                0 <= z < game.n_subspaces and 0 <= c < game.n_compacts
                for _, z, c in history
            ):
                raise ValueError("substrategy domain uses an illegal move index")
        if node + (zeta,) not in tree or not 0 <= zi < game.n_subspaces:
            raise ValueError("substrategy prescribes an illegal move")
    # every position reachable by following the substrategy must be covered
    stack: List[History] = [()]
    while stack:
        history = stack.pop()
        zeta, zi = moves[history]
        child = _zproj(history) + (zeta,)
        if tree.is_max(child):
            continue
        for ci in range(game.n_compacts):
            extended = history + ((zeta, zi, ci),)
            if extended not in moves:
                raise ValueError("substrategy is undefined at a reachable position")
            stack.append(extended)

    total: Dict[History, Offer] = {}

    def fill(history: History, node: NodePath) -> None:
        prescribed = moves.get(history)
        if prescribed is None:
            prescribed = (tree.children_labels(node)[0], fallback_z)
        total[history] = prescribed
        for zeta in tree.children_labels(node):
            child = node + (zeta,)
            if tree.is_max(child):
                continue
            for zi in range(game.n_subspaces):
                for ci in range(game.n_compacts):
                    fill(history + ((zeta, zi, ci),), child)

    fill((), ())
    return Strategy("I", total)


# -- witness extraction ---------------------------------------------------------


def _argmax_vector(xstar: Vector, candidates: Tuple[Vector, ...]) -> Vector:
    best_value = max(_dot(xstar, x) for x in candidates)
    return min(x for x in candidates if _dot(xstar, x) == best_value)


def _witness(game: GameSpec, leaf: History) -> Tuple[Vector, List[Vector]]:
    """An exact (functional, selections) pair realizing the payoff at a leaf."""
    sets = [game.model.selection_set(z, c) for _, z, c in leaf]
    weights = game.prefix_weights(_zproj(leaf))
    best_value, best_functional = None, None
    for xstar in sorted(game.model.functionals):
        value = sum(
            (w * max(_dot(xstar, x) for x in s) for w, s in zip(weights, sets)),
            Fraction(0),
        )
        if best_value is None or value > best_value:
            best_value, best_functional = value, xstar
    if best_value is None or best_value < game.model.epsilon:
        raise ValueError("leaf does not satisfy the payoff inequality")
    selections = [_argmax_vector(best_functional, s) for s in sets]
    return best_functional, selections


def extract_collections(game: GameSpec, strategy: Strategy) -> ExtractedCollections:
    """Pull witness collections out of a verified winning strategy for II.

    The compact choice at a (label, subspace) history is what the strategy
    replies along its own play; at each maximal history the payoff inequality
    holds, and its exact witnesses supply the functional and the selection
    vectors, indexed by (prefix, maximal history) pairs.
    """
    if game.payoff != PAYOFF_SZLENK:
        raise ValueError("collection extraction needs the szlenk payoff")
    if strategy.player != "II":
        raise ValueError("collection extraction needs a strategy for Player II")
    if not verify_strategy(game, strategy):
        raise ValueError("strategy is not a verified win for Player II")
    tree = game.tree
    compact_choices: Dict[ZDHistory, int] = {}
    functionals: Dict[ZDHistory, Vector] = {}
    selections: Dict[Tuple[ZDHistory, ZDHistory], Vector] = {}

    def walk(pairs: ZDHistory, history: History, node: NodePath) -> None:
        for offer in _offers(game, node):
            zeta, zi = offer
            child = node + (zeta,)
            ci = strategy.moves[(history, offer)]
            extended_pairs = pairs + (offer,)
            extended = history + ((zeta, zi, ci),)
            compact_choices[extended_pairs] = ci
            if tree.is_max(child):
                xstar, xs = _witness(game, extended)
                functionals[extended_pairs] = xstar
                for i in range(1, len(extended_pairs) + 1):
                    selections[(extended_pairs[:i], extended_pairs)] = xs[i - 1]
            else:
                walk(extended_pairs, extended, child)

    walk((), (), ())
    return ExtractedCollections(compact_choices, functionals, selections)


def build_szlenk_game(
    xi: Ordinal, budget: TruncationBudget, model: ModelSpace
) -> GameSpec:
    """The szlenk-payoff game on a budget truncation of the Gamma family."""
    family = gamma_family(Ordinal(xi))
    tree = family.truncate(budget)
    weights = {node: family.weight(node) for node in tree.nodes}
    return GameSpec(tree, model, weights, PAYOFF_SZLENK)


# -- serialization ---------------------------------------------------------------


def _frac_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def history_to_text(history: History) -> str:
    return ";".join(f"{zeta}:{zi}:{ci}" for zeta, zi, ci in history)


def history_from_text(text: str) -> History:
    if not text:
        return ()
    moves = []
    for part in text.split(";"):
        zeta, zi, ci = part.split(":")
        moves.append((Ordinal(zeta), int(zi), int(ci)))
    return tuple(moves)


def _offer_to_text(offer: Offer) -> str:
    return f"{offer[0]}:{offer[1]}"


def _offer_from_text(text: str) -> Offer:
    zeta, zi = text.split(":")
    return (Ordinal(zeta), int(zi))


def _pairs_to_text(pairs: ZDHistory) -> str:
    return ";".join(_offer_to_text(p) for p in pairs)


def game_to_json(game: GameSpec) -> dict:
    model = game.model
    data = {
        "tree": game.tree.to_json(),
        "weights": {
            path_to_text(node): _frac_text(game.weights[node])
            for node in sorted(game.tree.nodes)
        },
        "model": {
            "dim": model.dim,
            "subspaces": [
                [[_frac_text(x) for x in row] for row in m] for m in model.subspaces
            ],
            "compacts": [
                [[_frac_text(x) for x in v] for v in c] for c in model.compacts
            ],
            "functionals": [[_frac_text(x) for x in f] for f in model.functionals],
            "epsilon": _frac_text(model.epsilon),
            "norm": model.norm,
        },
    }
    if game.payoff == PAYOFF_SZLENK:
        data["payoff"] = PAYOFF_SZLENK
    else:
        data["payoff"] = {"table": sorted(history_to_text(h) for h in game.payoff)}
    return data


def game_from_json(data: Union[dict, str]) -> GameSpec:
    if isinstance(data, str):
        data = json.loads(data)
    model_data = data["model"]
    model = ModelSpace(
        dim=model_data["dim"],
        subspaces=model_data["subspaces"],
        compacts=model_data["compacts"],
        functionals=model_data["functionals"],
        epsilon=Fraction(model_data["epsilon"]),
        norm=model_data.get("norm", "max"),
    )
    tree = FiniteBTree.from_json(data["tree"])
    weights = {
        tuple(Ordinal(s) for s in key.split(",")): Fraction(value)
        for key, value in data["weights"].items()
    }
    payoff = data["payoff"]
    if payoff != PAYOFF_SZLENK:
        payoff = frozenset(history_from_text(h) for h in payoff["table"])
    return GameSpec(tree, model, weights, payoff)


def strategy_to_json(strategy: Strategy) -> dict:
    if strategy.player == "I":
        moves = {
            history_to_text(h): [str(zeta), zi]
            for h, (zeta, zi) in sorted(
                strategy.moves.items(), key=lambda kv: history_to_text(kv[0])
            )
        }
    else:
        moves = {
            f"{history_to_text(h)}|{_offer_to_text(offer)}": ci
            for (h, offer), ci in sorted(
                strategy.moves.items(),
                key=lambda kv: (history_to_text(kv[0][0]), _offer_to_text(kv[0][1])),
            )
        }
    return {"player": strategy.player, "moves": moves}


def strategy_from_json(data: Union[dict, str]) -> Strategy:
    if isinstance(data, str):
        data = json.loads(data)
    player = data["player"]
    if player == "I":
        moves = {
            history_from_text(key): (Ordinal(value[0]), int(value[1]))
            for key, value in data["moves"].items()
        }
    else:
        moves = {}
        for key, value in data["moves"].items():
            hist_text, offer_text = key.split("|")
            moves[(history_from_text(hist_text), _offer_from_text(offer_text))] = int(value)
    return Strategy(player, moves)


def collections_to_json(collections: ExtractedCollections) -> dict:
    return {
        "compacts": {
            _pairs_to_text(s): ci
            for s, ci in sorted(
                collections.compact_choices.items(), key=lambda kv: _pairs_to_text(kv[0])
            )
        },
        "functionals": {
            _pairs_to_text(t): [_frac_text(x) for x in f]
            for t, f in sorted(
                collections.functionals.items(), key=lambda kv: _pairs_to_text(kv[0])
            )
        },
        "selections": {
            f"{_pairs_to_text(s)}|{_pairs_to_text(t)}": [_frac_text(x) for x in v]
            for (s, t), v in sorted(
                collections.selections.items(),
                key=lambda kv: (_pairs_to_text(kv[0][1]), _pairs_to_text(kv[0][0])),
            )
        },
    }

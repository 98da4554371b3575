from dataclasses import dataclass


@dataclass(frozen=True)
class SearchBudget:
    """Resource caps shared by the exhaustive searches.

    Exceeding any cap yields an ``Inconclusive`` outcome, never a negative
    answer.
    """

    max_states: int = 10**6  # memoised graph states in blowdown search
    max_nodes: int = 10**6  # backtracking nodes in embedding search
    max_subtrees: int = 2**18  # connected subgraphs checked by the verifier
    basis: int | None = None  # embedding basis size; None = sum of -framings
    cross_check_limit: int = 8  # run the second pm route up to this many vertices


DEFAULT_BUDGET = SearchBudget()

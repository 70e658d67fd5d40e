"""Mechanical checks of the slow construction.

* ``check_civilised``: one new edge and one new K_{r+1}^(r) copy per round, each
  copy containing the previous and current added edge and no later one, and no
  infection once ``e0`` is removed.
* ``check_sequence``: the simulated trace of slow3(n) against the predicted order.
* ``scaling_report``: running times over a range of n and their doubling ratios.
"""

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from tqdm import tqdm

from hypergraph_bootstrap import config
from hypergraph_bootstrap.constructions import closed_form_T, expected_sequence, slow3
from hypergraph_bootstrap.core import Edge, Hypergraph, canonical_edge
from hypergraph_bootstrap.engine import (
    LinkIndex,
    infect_round,
    make_config,
    new_copies,
    run,
)
from hypergraph_bootstrap.exceptions import InvalidEdge, InvalidInput, UnsupportedParameter
from hypergraph_bootstrap.schemas import (
    SCALING_CSV_HEADER,
    CivilisedReport,
    EngineKind,
    Mismatch,
    ScalingRow,
    SequenceDiff,
    Violation,
)

logger = logging.getLogger("hypergraph_bootstrap.verify")


def _engine(engine_kind: Optional[Union[EngineKind, str]]) -> EngineKind:
    return make_config(k=2, engine_kind=engine_kind or config.ENGINE).engine_kind


def _render(edge: Sequence[int]) -> str:
    return "{" + ",".join(str(v) for v in edge) + "}"


# --- Civilised conditions ---


def check_civilised(
    G0: Hypergraph,
    e0: Sequence[int],
    r: Optional[int] = None,
    engine_kind: Optional[Union[EngineKind, str]] = None,
) -> CivilisedReport:
    """Run the K_{r+1}^(r) process on G0 and check the three civilised conditions."""
    r = G0.r if r is None else r
    if r != G0.r:
        raise InvalidInput(f"G0 is {G0.r}-uniform, checker asked for r={r}")
    try:
        e0 = canonical_edge(e0, G0.r, G0.n)
    except InvalidEdge as e:
        raise InvalidInput(f"e0 is not an edge of G0: {e}") from e
    if not G0.has_canonical(e0):
        raise InvalidInput(f"e0 = {_render(e0)} is not an edge of G0")

    kind = _engine(engine_kind)
    k = r + 1
    result = run(G0, make_config(k=k, engine_kind=kind, record_witnesses=True))
    logger.info(f"Checking civilised conditions over T={result.M} rounds")

    violations: List[Violation] = []

    # (1) one edge and one new copy per round
    state = G0.copy()
    links = LinkIndex(G0.edges())
    copies_by_round: Dict[int, Edge] = {}
    for record in result.rounds:
        added = record.edges
        copies = new_copies(state, added, k, links)
        if len(added) == 1 and len(copies) == 1:
            copies_by_round[record.t] = copies[0]
        else:
            violations.append(
                Violation(
                    condition=1,
                    t=record.t,
                    detail=f"{len(added)} new edges and {len(copies)} new copies",
                )
            )
        for edge in added:
            state.add_key(state.key(edge))
            links.add(edge)

    # (2) E(H_t) contains e_{t-1} and e_t and meets no later distinguished edge
    order: Dict[Edge, int] = {e0: 0}
    for record in result.rounds:
        for edge in record.edges:
            order.setdefault(edge, record.t)
    previous: Optional[Edge] = e0
    for record in result.rounds:
        copy = copies_by_round.get(record.t)
        current = record.edges[0] if len(record.added) == 1 else None
        if copy is not None and previous is not None:
            met = {sub for sub in combinations(copy, r) if sub in order}
            missing = sorted({previous, current} - met)
            later = sorted(e for e in met if order[e] > record.t)
            if missing or later:
                problem = (
                    f"misses {[_render(e) for e in missing]}"
                    if missing
                    else f"meets later edges {[_render(e) for e in later]}"
                )
                violations.append(
                    Violation(
                        condition=2,
                        t=record.t,
                        detail=f"copy {_render(copy)} {problem}",
                    )
                )
        previous = current

    # (3) G0 - e0 is stable
    reduced = G0.copy()
    reduced.remove_edge(e0)
    leaked = infect_round(reduced, k, kind)
    if leaked:
        violations.append(
            Violation(
                condition=3,
                t=1,
                detail=f"G0 - e0 infects {len(leaked)} edges, first {_render(leaked[0][0])}",
            )
        )

    failed = {v.condition for v in violations}
    first = min(violations, key=lambda v: (v.t, v.condition)) if violations else None
    report = CivilisedReport(
        cond1_ok=1 not in failed,
        cond2_ok=2 not in failed,
        cond3_ok=3 not in failed,
        first_violation=first,
        T=result.M,
    )
    if first is not None:
        logger.warning(f"Condition ({first.condition}) fails at t={first.t}: {first.detail}")
    return report


# --- Predicted order ---


def check_sequence(
    n: int,
    engine_kind: Optional[Union[EngineKind, str]] = None,
    G0: Optional[Hypergraph] = None,
) -> SequenceDiff:
    """Simulate slow3(n) (or a perturbed ``G0`` on its vertex set) against the predicted order."""
    construction = slow3(n)
    expected = expected_sequence(n)
    start = construction.G0 if G0 is None else G0
    kind = _engine(engine_kind)
    result = run(start, make_config(k=4, engine_kind=kind, record_witnesses=True))

    matched = 0
    copies_ok = True
    mismatch: Optional[Mismatch] = None
    previous = construction.e0
    for record in result.rounds:
        step = expected[record.t - 1] if record.t <= len(expected) else None
        if step is None or record.edges != [step.edge]:
            mismatch = Mismatch(
                t=record.t,
                expected=list(step.edge) if step is not None else None,
                actual=[list(edge) for edge in record.edges],
                phase=step.phase if step is not None else None,
                stage=step.stage if step is not None else None,
                position=step.position if step is not None else None,
            )
            break
        matched += 1
        witness = record.added[0][1]
        if witness != tuple(sorted(set(previous) | set(step.edge))):
            if copies_ok:
                logger.warning(
                    f"t={record.t}: witness {witness} is not e_(t-1) | e_t "
                    f"for e_(t-1)={previous}, e_t={step.edge}"
                )
            copies_ok = False
        previous = step.edge

    if mismatch is None and matched < len(expected):
        step = expected[matched]
        mismatch = Mismatch(
            t=matched + 1,
            expected=list(step.edge),
            actual=[],
            phase=step.phase,
            stage=step.stage,
            position=step.position,
        )

    diff = SequenceDiff(
        matched_prefix_len=matched,
        expected_len=len(expected),
        first_mismatch=mismatch,
        copies_ok=copies_ok,
    )
    if mismatch is not None:
        logger.warning(
            f"slow3({n}) diverges at t={mismatch.t}: expected {mismatch.expected}, "
            f"got {mismatch.actual}"
        )
    else:
        logger.info(f"slow3({n}) follows the predicted order for all {matched} rounds")
    return diff


# --- Scaling ---


def scaling_row(n: int, engine_kind: str) -> ScalingRow:
    """One scan row; module level so worker processes can pickle it."""
    construction = slow3(n)
    G0 = construction.G0
    result = run(G0, make_config(k=4, engine_kind=engine_kind, record_witnesses=False))
    if result.M != closed_form_T(n):
        logger.warning(f"slow3({n}): T={result.M}, closed form gives {closed_form_T(n)}")
    return ScalingRow(
        n=n,
        T=result.M,
        vertices=G0.n,
        edges_initial=result.initial_edge_count,
        edges_final=result.final_edge_count,
        wall_ms=result.wall_ms,
    )


def scaling_report(
    n_values: Iterable[int],
    engine_kind: Optional[Union[EngineKind, str]] = None,
    jobs: int = 1,
    progress: Optional[bool] = None,
) -> List[ScalingRow]:
    """Simulate slow3(n) for each n; rows in ascending n with T(n)/T(n/2) where available."""
    values = sorted(set(n_values))
    if not values:
        raise UnsupportedParameter("scaling_report needs at least one n")
    for n in values:
        if n < 2:
            raise UnsupportedParameter(f"n must be ≥ 2 (got n={n})")
    if jobs < 1:
        raise UnsupportedParameter(f"jobs must be ≥ 1 (got {jobs})")
    kind = _engine(engine_kind).value
    show = config.PROGRESS if progress is None else progress

    rows: Dict[int, ScalingRow] = {}
    with tqdm(total=len(values), unit="n", disable=not show) as pbar:
        if jobs == 1:
            for n in values:
                rows[n] = scaling_row(n, kind)
                pbar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                future_to_n = {executor.submit(scaling_row, n, kind): n for n in values}
                for future in as_completed(future_to_n):
                    rows[future_to_n[future]] = future.result()
                    pbar.update(1)

    report = []
    for n in values:
        row = rows[n]
        half = rows.get(n // 2) if n % 2 == 0 else None
        if half is not None and half.T > 0:
            ratio = row.T / half.T
            row = row.model_copy(update={"ratio_vs_half_n": ratio})
            logger.info(
                f"T({n})/T({n // 2}) = {ratio:.4f}, growth exponent {math.log2(ratio):.3f}"
            )
        report.append(row)
    return report


def write_scaling_csv(rows: List[ScalingRow], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SCALING_CSV_HEADER)
        for row in rows:
            writer.writerow(row.csv_fields())
    logger.debug(f"Wrote {len(rows)} scaling rows to {path}")


def read_scaling_csv(path: Union[str, Path]) -> List[ScalingRow]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return [
            ScalingRow(
                n=int(line["n"]),
                T=int(line["T"]),
                vertices=int(line["vertices"]),
                edges_initial=int(line["edges_initial"]),
                edges_final=int(line["edges_final"]),
                wall_ms=float(line["wall_ms"]),
                ratio_vs_half_n=float(line["ratio_vs_half_n"]) if line["ratio_vs_half_n"] else None,
            )
            for line in csv.DictReader(f)
        ]

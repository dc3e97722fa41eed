from collections import defaultdict
from typing import DefaultDict, Dict, Iterable, List, Sequence, Set, Tuple

import networkx as nx

from groupsense.cooccur import CoOccurrence
from groupsense.types import LocationKey, UserId
from groupsense.utils import local_day, modal_label

from .core import GroupSession, MemberInterval


def cluster_cooccurrences(
    cooccurrences: Iterable[CoOccurrence], timezone: str = "UTC"
) -> List[List[CoOccurrence]]:
    """Split co-occurrences into time neighborhoods.

    Records join one neighborhood iff they share a location key and local calendar
    day of entry and their intervals overlap, directly or through a chain of
    overlapping records.
    """
    by_day: DefaultDict[Tuple[LocationKey, int], List[CoOccurrence]] = defaultdict(list)
    for c in cooccurrences:
        by_day[(c.location_key, local_day(c.entry, timezone))].append(c)

    clusters: List[List[CoOccurrence]] = []
    for key in sorted(by_day):
        records = sorted(
            by_day[key], key=lambda c: (c.entry, c.departure, c.user_i, c.user_j)
        )
        cluster = [records[0]]
        cluster_end = records[0].departure
        for c in records[1:]:
            if c.entry <= cluster_end:
                cluster.append(c)
                cluster_end = max(cluster_end, c.departure)
            else:
                clusters.append(cluster)
                cluster, cluster_end = [c], c.departure
        clusters.append(cluster)
    return clusters


def _member_intervals(
    records: Sequence[CoOccurrence], members: Sequence[UserId]
) -> Tuple[MemberInterval, ...]:
    spans: Dict[UserId, List[int]] = {}
    for c in records:
        for user in c.pair:
            span = spans.setdefault(user, [c.entry, c.departure])
            span[0] = min(span[0], c.entry)
            span[1] = max(span[1], c.departure)
    return tuple((user, spans[user][0], spans[user][1]) for user in members)


def group_from_cooccurrences(
    records: Sequence[CoOccurrence], members: Iterable[UserId]
) -> GroupSession:
    """Build a candidate group spanning ``records``.

    The activity is the mode over the records, ties to the lexicographically
    smallest label.
    """
    ordered = tuple(sorted(set(members)))
    locations: Set[str] = set()
    for c in records:
        locations |= c.loc_i | c.loc_j
    return GroupSession(
        members=ordered,
        entry=min(c.entry for c in records),
        departure=max(c.departure for c in records),
        location_key=records[0].location_key,
        locations=frozenset(locations),
        loc_type=modal_label(c.loc_type for c in records),
        activity=modal_label(c.activity for c in records),
        member_intervals=_member_intervals(records, ordered),
    )


def merge_into_groups(
    cooccurrences: Sequence[CoOccurrence], timezone: str = "UTC"
) -> List[GroupSession]:
    """Merge pairwise co-occurrences into candidate groups.

    Within every time neighborhood (see ``cluster_cooccurrences``) users are
    nodes and co-occurrences edges; every connected component of three or more
    users becomes a group. Every co-occurrence is also emitted as a pair group.

    Parameters
    ----------
    cooccurrences
        User-level co-occurrences
    timezone
        Zone defining calendar days

    Returns
    -------
    List[GroupSession]
        Unfiltered candidates in canonical order; the result does not depend on
        the input order
    """
    groups: List[GroupSession] = []
    for cluster in cluster_cooccurrences(cooccurrences, timezone):
        graph = nx.Graph()
        graph.add_edges_from(c.pair for c in cluster)
        for component in nx.connected_components(graph):
            if len(component) < 3:
                continue
            records = [c for c in cluster if c.user_i in component]
            groups.append(group_from_cooccurrences(records, component))
        groups.extend(group_from_cooccurrences([c], c.pair) for c in cluster)
    groups.sort(
        key=lambda g: (g.location_key, g.entry, g.departure, len(g.members), g.members)
    )
    return groups

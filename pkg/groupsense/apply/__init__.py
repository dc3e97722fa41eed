"""Sequential and Dask-parallel execution of per-shard pipeline work."""

from typing import Any, List, Sequence

from .core import BaseShardApplier, ShardApplier, ShardFunction  # noqa: F401


def apply_to_shards(
    f: ShardFunction,
    shards: Sequence[Any],
    name: str = "shards",
    n_parallel: int = 1,
    scheduler: str = "processes",
    progress_bar: bool = False,
) -> List[Any]:
    """Run ``f`` over ``shards`` sequentially, or with Dask when ``n_parallel > 1``."""
    if n_parallel > 1:
        from .dask import DaskShardApplier

        return DaskShardApplier(f, name).apply(
            shards, n_parallel=n_parallel, scheduler=scheduler
        )
    return ShardApplier(f, name).apply(shards, progress_bar=progress_bar)

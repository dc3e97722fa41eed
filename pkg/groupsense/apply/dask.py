from typing import Any, List, Sequence, Union

from dask import bag as db
from dask.distributed import Client

from .core import BaseShardApplier, Shard

Scheduler = Union[str, Client]


class DaskShardApplier(BaseShardApplier):
    """Parallel shard applier built on a Dask bag.

    Shards are spread over ``n_parallel`` bag partitions; results come back in
    shard order whatever the scheduler. For more information, see
    https://docs.dask.org/en/stable/bag.html
    """

    def apply(  # type: ignore
        self,
        shards: Sequence[Shard],
        n_parallel: int = 2,
        scheduler: Scheduler = "processes",
    ) -> List[Any]:
        """Apply the function to every shard in parallel using Dask.

        Parameters
        ----------
        shards
            Independent units of work
        n_parallel
            Parallelism level. Corresponds to ``npartitions`` in the constructed
            Dask bag. For ``scheduler="processes"``, number of processes launched.
            Recommended to be no more than the number of cores on the running
            machine.
        scheduler
            A Dask scheduling configuration: either a string option or
            a ``Client``. For more information, see
            https://docs.dask.org/en/stable/scheduling.html#

        Returns
        -------
        List[Any]
            One result per shard, in shard order
        """
        if n_parallel < 2:
            raise ValueError(
                "n_parallel should be >= 2. "
                "For single process application, use ShardApplier."
            )
        if not shards:
            return []
        bag = db.from_sequence(list(shards), npartitions=min(n_parallel, len(shards)))
        return list(bag.map(self._f).compute(scheduler=scheduler))

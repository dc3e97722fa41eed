from typing import Any, Callable, List, Sequence

from tqdm import tqdm

Shard = Any
ShardFunction = Callable[[Shard], Any]


class BaseShardApplier:
    """Base class for shard applier objects.

    A shard applier runs a pure function over a sequence of independent shards
    (per-location session groups, per-user event lists, ...) and returns the
    results in shard order. Subclasses must implement the ``apply`` method.

    Parameters
    ----------
    f
        Function applied to every shard
    name
        Name shown on progress bars and in logs
    """

    def __init__(self, f: ShardFunction, name: str = "shards") -> None:
        self._f = f
        self.name = name

    def apply(self, shards: Sequence[Shard], **kwargs: Any) -> List[Any]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}, applying {getattr(self._f, '__name__', self._f)}"


class ShardApplier(BaseShardApplier):
    """Shard applier running sequentially in the current process."""

    def apply(  # type: ignore
        self, shards: Sequence[Shard], progress_bar: bool = True
    ) -> List[Any]:
        """Apply the function to every shard.

        Parameters
        ----------
        shards
            Independent units of work
        progress_bar
            Display a progress bar?

        Returns
        -------
        List[Any]
            One result per shard, in shard order
        """
        return [
            self._f(shard)
            for shard in tqdm(shards, desc=self.name, disable=not progress_bar)
        ]

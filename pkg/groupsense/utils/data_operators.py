from collections import Counter
from typing import List


def check_unique_names(names: List[str]) -> None:
    """Check that run variant names are unique."""
    if not names:
        return
    name, count = Counter(names).most_common(1)[0]
    if count > 1:
        raise ValueError(f"Variant names not unique: {count} variants named {name}")

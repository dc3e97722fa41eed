from typing import NamedTuple

Config = NamedTuple

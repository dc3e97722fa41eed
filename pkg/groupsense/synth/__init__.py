"""Synthetic populations with planted groups, and scoring against them."""

from .generator import (  # noqa: F401
    FRIENDS,
    WORK,
    WORK_FRIENDS,
    GroundTruthSession,
    MeetingTemplate,
    PlantedGroup,
    PopulationSpec,
    SyntheticCorpus,
    generate,
    plant_groups,
    spec_from_dict,
    user_ids,
    validate_spec,
)
from .scoring import EvalReport, is_match, score, write_eval_report  # noqa: F401
from .world import Venue, World  # noqa: F401
from .writers import (  # noqa: F401
    format_traces,
    load_population_spec,
    read_ground_truth,
    write_corpus,
    write_ground_truth,
    write_traces,
)

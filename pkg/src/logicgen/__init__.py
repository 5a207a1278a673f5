"""Seeded logic-puzzle synthesis with rule-based verification and binary rewards.

The package generates puzzle instances with controllable difficulty, checks
candidate answers with exact rule-based verifiers, scores model responses
with a strict binary reward, calibrates difficulty ranges against model
endpoints, and builds deduplicated JSONL datasets.
"""

__version__ = "0.1.0"

from .builtin import BUILTIN_DESCRIPTORS, default_registry
from .calibration import (
    AttemptTimeout,
    CalibrationReport,
    DifficultyLadder,
    HTTPChatClient,
    LevelResult,
    ModelEndpointConfig,
    estimate_pass,
    find_lower_bound,
    find_upper_bound,
)
from .dataset import (
    BuildConfig,
    BuildResult,
    TaskRequest,
    build_dataset,
    config_hash,
    contamination_check,
    read_jsonl,
    stats,
    write_stats_csv,
)
from .errors import (
    CalibrationTransportError,
    ContaminationError,
    GenerationExhausted,
    LogicGenError,
    ParamError,
    PayloadError,
    RegistrationError,
    SearchBudgetExceeded,
    UnknownTaskError,
)
from .grid.counting import csp_count_solutions
from .protocol import (
    PROMPT_INSTRUCTION,
    REFLECTION_PHRASES,
    ParsedResponse,
    Verdict,
    avg_at_k,
    check_format,
    compute_reward,
    extract_answer_text,
    pass_at_k,
    reflection_ratio,
    render_training_prompt,
)
from .registry import (
    SCHEMA_VERSION,
    Instance,
    ParamSchema,
    ParamSpec,
    Registry,
    TaskDescriptor,
    derive_seed,
    normalize_prompt,
    params_from_jsonable,
    params_to_jsonable,
    prompt_id,
)
from .rng import SplitMix64

__all__ = [
    "__version__",
    "AttemptTimeout",
    "BUILTIN_DESCRIPTORS",
    "BuildConfig",
    "BuildResult",
    "CalibrationReport",
    "CalibrationTransportError",
    "ContaminationError",
    "DifficultyLadder",
    "GenerationExhausted",
    "HTTPChatClient",
    "Instance",
    "LevelResult",
    "LogicGenError",
    "ModelEndpointConfig",
    "PROMPT_INSTRUCTION",
    "ParamError",
    "ParamSchema",
    "ParamSpec",
    "ParsedResponse",
    "PayloadError",
    "REFLECTION_PHRASES",
    "RegistrationError",
    "Registry",
    "SCHEMA_VERSION",
    "SearchBudgetExceeded",
    "SplitMix64",
    "TaskDescriptor",
    "TaskRequest",
    "UnknownTaskError",
    "Verdict",
    "avg_at_k",
    "build_dataset",
    "check_format",
    "compute_reward",
    "config_hash",
    "contamination_check",
    "csp_count_solutions",
    "default_registry",
    "derive_seed",
    "estimate_pass",
    "extract_answer_text",
    "find_lower_bound",
    "find_upper_bound",
    "normalize_prompt",
    "params_from_jsonable",
    "params_to_jsonable",
    "pass_at_k",
    "prompt_id",
    "read_jsonl",
    "reflection_ratio",
    "render_training_prompt",
    "stats",
    "write_stats_csv",
]

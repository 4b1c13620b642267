from ._core import (
    Percent,
    UnigenError,
    blueprint_hash,
    canonical_serialize,
    completeness,
    extract_json,
    improvement,
    matrix_completeness,
    parse_blueprint,
    parse_compile_log,
    plan_script_set,
    template_generate,
    validate_blueprint,
    validate_scripts,
)

__all__ = [
    "Percent",
    "UnigenError",
    "blueprint_hash",
    "canonical_serialize",
    "completeness",
    "extract_json",
    "improvement",
    "matrix_completeness",
    "parse_blueprint",
    "parse_compile_log",
    "plan_script_set",
    "template_generate",
    "validate_blueprint",
    "validate_scripts",
]

"""Engine layer: exact linear algebra, algebras, complexes and tilting."""

from .exactlin import (
    Field,
    FieldMismatchError,
    PrimeField,
    RationalField,
    image_basis,
    make_field,
    nullspace,
    rank,
    rref,
    solve,
)
from .algebra import (
    Algebra,
    Arrow,
    NonSplitError,
    PresentationError,
    QuiverPresentation,
    RadicalError,
    StructureError,
    algebra_from_quiver,
    center_dimension,
    corner,
    idempotent_ideal,
    multiply,
    peirce,
    primitive_idempotents,
    quotient_by_idempotent_ideal,
    radical,
    radical_layers,
    symmetrizing_form,
)
from .modules import ModuleRep, hom_module, projective_module, regular_module, top_and_min_generators
from .complexes import (
    ChainMap,
    ComplexValidationError,
    ProjComplex,
    cohomology_dims,
    compose,
    cone,
    direct_sum,
    hom_dimensions,
    homotopy_hom,
    identity_map,
    minimize,
    projective_resolution,
    shift,
    stalk,
    validate,
)
from .decomposition import decompose, iso_test
from .tilting import (
    CompletionTrace,
    DegenerateComplexError,
    EndAlgebra,
    GenerationMode,
    NotSymmetricError,
    PartialTiltingCert,
    TiltingReport,
    bongartz_extend_length2,
    complete,
    complex_length,
    count_indec_types,
    delta_step,
    end_algebra,
    is_partial_tilting,
    tilting_criterion_symmetric,
    verify_tilting,
)
from .recollement import (
    PipelineError,
    QuotientComparison,
    RecollementCheck,
    SupportError,
    VerdictLevel,
    aea_cokernel_check,
    ext_vanishing_check,
    induce_up,
    pipeline,
    quotient_compare,
    recollement_tilting_check,
    restrict,
)
from .formats import (
    SpecParseError,
    complex_to_text,
    load_algebra,
    load_complex,
    parse_algebra,
    parse_complex,
)
from .reports import ReportService, render, write_report

__all__ = [
    "Field",
    "FieldMismatchError",
    "PrimeField",
    "RationalField",
    "image_basis",
    "make_field",
    "nullspace",
    "rank",
    "rref",
    "solve",
    "Algebra",
    "Arrow",
    "NonSplitError",
    "PresentationError",
    "QuiverPresentation",
    "RadicalError",
    "StructureError",
    "algebra_from_quiver",
    "center_dimension",
    "corner",
    "idempotent_ideal",
    "multiply",
    "peirce",
    "primitive_idempotents",
    "quotient_by_idempotent_ideal",
    "radical",
    "radical_layers",
    "symmetrizing_form",
    "ModuleRep",
    "hom_module",
    "projective_module",
    "regular_module",
    "top_and_min_generators",
    "ChainMap",
    "ComplexValidationError",
    "ProjComplex",
    "cohomology_dims",
    "compose",
    "cone",
    "direct_sum",
    "hom_dimensions",
    "homotopy_hom",
    "identity_map",
    "minimize",
    "projective_resolution",
    "shift",
    "stalk",
    "validate",
    "decompose",
    "iso_test",
    "CompletionTrace",
    "DegenerateComplexError",
    "EndAlgebra",
    "GenerationMode",
    "NotSymmetricError",
    "PartialTiltingCert",
    "TiltingReport",
    "bongartz_extend_length2",
    "complete",
    "complex_length",
    "count_indec_types",
    "delta_step",
    "end_algebra",
    "is_partial_tilting",
    "tilting_criterion_symmetric",
    "verify_tilting",
    "PipelineError",
    "QuotientComparison",
    "RecollementCheck",
    "SupportError",
    "VerdictLevel",
    "aea_cokernel_check",
    "ext_vanishing_check",
    "induce_up",
    "pipeline",
    "quotient_compare",
    "recollement_tilting_check",
    "restrict",
    "SpecParseError",
    "complex_to_text",
    "load_algebra",
    "load_complex",
    "parse_algebra",
    "parse_complex",
    "ReportService",
    "render",
    "write_report",
]

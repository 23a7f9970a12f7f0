"""Configuration and manifest schemas."""
from .run import ExperimentConfigSchema, RunManifestSchema
from .parameters import (
    ParametersSchema,
    EvolveSchema,
    HorizonSchema,
    AmplitudeSchema,
    Fig1Schema,
    RitzSchema,
    CostScanSchema,
    ClassicalSchema,
)

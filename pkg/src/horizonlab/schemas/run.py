from marshmallow import Schema, RAISE
from marshmallow.fields import Dict, List, String, DateTime


class ExperimentConfigSchema(Schema):
    class Meta:
        unknown = RAISE

    experiment = String(required=True)
    output_dir = String(load_default="results")
    parameters = Dict(keys=String(), load_default=dict)


class RunManifestSchema(Schema):
    experiment = String(required=True)
    config = Dict(keys=String(), required=True)
    version = String(required=True)
    started = DateTime(required=True)
    finished = DateTime(required=True)
    files = Dict(keys=String(), values=String(), required=True)
    notes = List(String(), load_default=list)

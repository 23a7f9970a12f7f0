"""Experiment parameter schemas.

Unknown keys are rejected, missing optional keys take the defaults below.
"""
from marshmallow import Schema, RAISE, validates_schema, ValidationError
from marshmallow.fields import Boolean, Float, Integer, List, String
from marshmallow.validate import Length, OneOf, Range

from horizonlab.classical import MapKind, Perturbation
from horizonlab.costmeter.pipelines import SystemKind
from horizonlab.evolution import PropagationMode
from horizonlab.perturbation import ErrorKind
from horizonlab.ritz.hamiltonian import HamiltonianKind


Positive = Range(min=0, min_inclusive=False)
Nonnegative = Range(min=0)


class ParametersSchema(Schema):
    class Meta:
        unknown = RAISE
        ordered = True


class SpectrumMixin(Schema):
    """Random exact spectrum and its perturbation."""
    dim = Integer(load_default=200, validate=Range(min=1))
    hbar = Float(load_default=1.0, validate=Positive)
    energy_span = Float(load_default=1.0, validate=Positive)
    equal_weights = Boolean(load_default=True)
    kind = String(load_default=ErrorKind.UNIFORM.value, validate=OneOf([k.value for k in ErrorKind]))
    seed = Integer(required=True)


class EvolveSchema(SpectrumMixin, ParametersSchema):
    dE = Float(load_default=1e-3, validate=Positive)
    dE_coeff = Float(load_default=0.0, validate=Nonnegative)
    epsilon = Float(load_default=None, allow_none=True, validate=Nonnegative)
    mode = String(load_default=PropagationMode.DIAGONAL.value,
                  validate=OneOf([m.value for m in PropagationMode]))
    t_max = Float(load_default=None, allow_none=True, validate=Positive)
    samples = Integer(load_default=1000, validate=Range(min=2))

    @validates_schema
    def full_mode_residuals(self, data, **kwargs):
        if data["mode"] == PropagationMode.FULL and not (data["epsilon"] or data["dE_coeff"]):
            raise ValidationError("Full mode needs a positive epsilon or dE_coeff.", "epsilon")


class HorizonSchema(SpectrumMixin, ParametersSchema):
    kind = String(load_default=ErrorKind.STRATIFIED.value,
                  validate=OneOf([k.value for k in ErrorKind]))
    dims = List(Integer(validate=Range(min=1)), load_default=lambda: [200], validate=Length(min=1))
    dEs = List(Float(validate=Positive), load_default=lambda: [1e-2, 1e-3, 1e-4],
               validate=Length(min=1))
    seeds = Integer(load_default=8, validate=Range(min=1))
    threshold = Float(load_default=0.1, validate=Range(min=0, max=1, min_inclusive=False,
                                                        max_inclusive=False))
    window = Integer(load_default=16, validate=Range(min=1))
    samples = Integer(load_default=4000, validate=Range(min=100))
    t_factor = Float(load_default=4.0, validate=Range(min=1))


class AmplitudeSchema(SpectrumMixin, ParametersSchema):
    dims = List(Integer(validate=Range(min=1)), load_default=lambda: [50, 200, 800],
                validate=Length(min=1))
    dE = Float(load_default=1e-2, validate=Positive)
    tail = List(Float(validate=Positive), load_default=lambda: [10.0, 100.0],
                validate=Length(equal=2))
    samples = Integer(load_default=2000, validate=Range(min=100))

    @validates_schema
    def ordered_tail(self, data, **kwargs):
        if data["tail"][0] >= data["tail"][1]:
            raise ValidationError("Tail window must be increasing.", "tail")


class Fig1Schema(SpectrumMixin, ParametersSchema):
    dE = Float(load_default=1e-3, validate=Positive)
    t_factor = Float(load_default=20.0, validate=Range(min=2))
    samples = Integer(load_default=4000, validate=Range(min=100))


class RitzSchema(ParametersSchema):
    model = String(load_default=HamiltonianKind.COUPLED_QUARTIC_2D.value,
                   validate=OneOf([k.value for k in HamiltonianKind]))
    coupling = Float(load_default=0.1, validate=Nonnegative)
    omega = List(Float(validate=Positive), load_default=None, allow_none=True)
    hbar = Float(load_default=1.0, validate=Positive)
    dims = List(Integer(validate=Range(min=1)), load_default=lambda: [6, 8, 10, 12, 14],
                validate=Length(min=4))
    levels = Integer(load_default=10, validate=Range(min=1))
    reference = Integer(load_default=24, validate=Range(min=2))

    @validates_schema
    def harmonic_uncoupled(self, data, **kwargs):
        if data["model"] == HamiltonianKind.HARMONIC_1D and data["coupling"]:
            raise ValidationError("harmonic_1d takes no coupling.", "coupling")


class CostScanSchema(ParametersSchema):
    systems = List(String(validate=OneOf([s.value for s in SystemKind])),
                   load_default=lambda: [s.value for s in SystemKind], validate=Length(min=1))
    T_integrable = List(Float(validate=Range(min=1, min_inclusive=False)),
                        load_default=lambda: [1e3, 1e30], validate=Length(equal=2))
    T_nonintegrable = List(Float(validate=Range(min=1, min_inclusive=False)),
                           load_default=lambda: [1e2, 1e16], validate=Length(equal=2))
    points = Integer(load_default=15, validate=Range(min=3))
    hbar = Float(load_default=1.0, validate=Positive)
    N_levels = Integer(load_default=100, validate=Range(min=1))
    coupling = Float(load_default=0.1, validate=Nonnegative)
    beta_dims = List(Integer(validate=Range(min=1)), load_default=lambda: [8, 16, 32],
                     validate=Length(min=2))


class ClassicalSchema(ParametersSchema):
    map = String(load_default=MapKind.STANDARD.value, validate=OneOf([k.value for k in MapKind]))
    parameter = Float(load_default=7.0)
    theta = Float(load_default=1.0)
    p = Float(load_default=0.0)
    perturb = String(load_default=Perturbation.ANGLE.value,
                     validate=OneOf([k.value for k in Perturbation]))
    delta0 = Float(load_default=1e-100, validate=Positive)
    steps = Integer(load_default=200, validate=Range(min=13))
    n_bits = Integer(load_default=512, validate=Range(min=8))
    # None picks the range from the measured growth kind.
    T = List(Float(validate=Range(min=1)), load_default=None, validate=Length(equal=2))
    points = Integer(load_default=13, validate=Range(min=3))
    delta = Float(load_default=1.0, validate=Positive)
    alpha_model = Float(load_default=2.0, validate=Positive)

# Django REST Framework serializers do two jobs here:
# - validate the arguments of a simulation run (RunSpecSerializer)
# - turn report objects (fringe reports, histograms, golden checks) into
#   plain Python data that the JSON renderer can write
import math

from rest_framework import serializers

from .conf import LENGTH_CONVENTIONS, fringelab_settings
from .exceptions import InvalidConfigurationError
from .semiclassical import classical_density
from .spin_algebra import TwoModeConfig

COMMANDS = (
    'fringes',
    'weak-values',
    'envelope',
    'semiclassical',
    'classical-mc',
    'reproduce-paper',
)
FORMATS = ('csv', 'json')
MIN_TRACE_SAMPLES = 16
MIN_MC_SAMPLES = 10 ** 4
DEFAULT_MC_SAMPLES = 10 ** 6


class FiniteFloatField(serializers.FloatField):
    """FloatField that writes NaN and infinities as null."""

    def to_representation(self, value):
        """The value as a float, or None when it is NaN or infinite."""
        value = float(value)
        return value if math.isfinite(value) else None


def _check_radians(value, name):
    if not math.isfinite(value):
        raise serializers.ValidationError({name: 'phase must be finite'})
    if abs(value) > math.pi + 1e-12:
        raise serializers.ValidationError({
            name: f'phase {value:g} lies outside [-pi, pi]; phases are given in radians, not degrees'
        })


class RunSpecSerializer(serializers.Serializer):
    """
    Validates one simulation run.

    Photon-number differences are the integers 2*m_psi and 2*m; phases are
    radians.  ``samples`` is the number of phase points for trace commands
    and the Monte-Carlo sample count for ``classical-mc``.
    """
    command = serializers.ChoiceField(choices=COMMANDS)
    N = serializers.IntegerField(min_value=1, allow_null=True, default=None)
    input_diff = serializers.IntegerField(default=0)
    output_diff = serializers.IntegerField(default=0)
    phi_min = serializers.FloatField(default=0.0)
    phi_max = serializers.FloatField(default=math.pi)
    phi = serializers.FloatField(allow_null=True, default=None)
    samples = serializers.IntegerField(allow_null=True, default=None)
    seed = serializers.IntegerField(min_value=0, default=0)
    output_path = serializers.CharField(allow_null=True, allow_blank=False, default=None)
    format = serializers.ChoiceField(choices=FORMATS, default='csv')
    length = serializers.ChoiceField(choices=LENGTH_CONVENTIONS, allow_null=True, default=None)

    def validate(self, attrs):
        """
        Check the run as a whole once the fields are parsed.

        Args:
            attrs: the field values, already type-checked.

        Returns:
            ``attrs`` with ``samples`` filled in from the command defaults.

        Raises:
            ValidationError: naming the field (or the configuration) that is invalid.
        """
        command = attrs['command']
        if command == 'reproduce-paper':
            return attrs

        if attrs['N'] is None:
            raise serializers.ValidationError({'N': f'the {command} command needs a photon number'})

        output_diff = attrs['input_diff'] if command == 'classical-mc' else attrs['output_diff']
        try:
            TwoModeConfig.from_differences(attrs['N'], attrs['input_diff'], output_diff)
        except InvalidConfigurationError as exc:
            raise serializers.ValidationError({'non_field_errors': [str(exc)]}) from exc

        if command == 'classical-mc':
            if attrs['samples'] is None:
                attrs['samples'] = DEFAULT_MC_SAMPLES
            if attrs['samples'] < MIN_MC_SAMPLES:
                raise serializers.ValidationError(
                    {'samples': f'Monte-Carlo runs need samples >= {MIN_MC_SAMPLES}'})
            if attrs['phi'] is None:
                raise serializers.ValidationError({'phi': 'classical-mc needs a single phase'})
            _check_radians(attrs['phi'], 'phi')
            return attrs

        if attrs['samples'] is None:
            attrs['samples'] = fringelab_settings.GRID_POINTS
        if attrs['samples'] < MIN_TRACE_SAMPLES:
            raise serializers.ValidationError({'samples': f'samples must be >= {MIN_TRACE_SAMPLES}'})
        _check_radians(attrs['phi_min'], 'phi_min')
        _check_radians(attrs['phi_max'], 'phi_max')
        if not attrs['phi_min'] < attrs['phi_max']:
            raise serializers.ValidationError({'phi_max': 'phi_max must exceed phi_min'})
        return attrs

    def create(self, validated_data):
        """Build the immutable RunSpec that ``runner.run`` executes."""
        # imported here: the runner imports this module for its payloads
        from .runner import RunSpec
        return RunSpec(**validated_data)


class ConfigSerializer(serializers.Serializer):
    """A TwoModeConfig with both the half-integer and the difference form."""
    N = serializers.IntegerField()
    m_psi = serializers.FloatField()
    m = serializers.FloatField()
    input_diff = serializers.IntegerField()
    output_diff = serializers.IntegerField()


class FringeComparisonSerializer(serializers.Serializer):
    """One fringe of a report."""
    start = FiniteFloatField()
    end = FiniteFloatField()
    width = FiniteFloatField()
    j3_exp = FiniteFloatField()
    center = FiniteFloatField()
    matching_phase = FiniteFloatField(allow_null=True)
    offset = FiniteFloatField(allow_null=True)
    inside_fringe = serializers.BooleanField()
    exceeds_maximum = serializers.BooleanField()


class FringeReportSerializer(serializers.Serializer):
    """Zeros, widths, |J3|_exp and the per-fringe theory match of one trace."""
    schema_version = serializers.SerializerMethodField()
    config = ConfigSerializer()
    length = serializers.CharField()
    zeros = serializers.ListField(child=FiniteFloatField())
    widths = serializers.ListField(child=FiniteFloatField())
    j3_exp = serializers.ListField(child=FiniteFloatField())
    max_j3 = FiniteFloatField()
    support = serializers.ListField(child=serializers.ListField(child=FiniteFloatField()))
    theory_match = FringeComparisonSerializer(many=True)
    notes = serializers.ListField(child=serializers.CharField())

    def get_schema_version(self, obj):
        """The FRINGELAB SCHEMA_VERSION setting."""
        return fringelab_settings.SCHEMA_VERSION


class TraceTableSerializer(serializers.Serializer):
    """Column-oriented JSON for the phase-resolved commands."""
    schema_version = serializers.SerializerMethodField()
    command = serializers.CharField()
    config = ConfigSerializer()
    length = serializers.CharField(allow_null=True)
    columns = serializers.DictField(child=serializers.ListField(child=FiniteFloatField()))
    report = FringeReportSerializer(allow_null=True, required=False)

    def get_schema_version(self, obj):
        """The FRINGELAB SCHEMA_VERSION setting."""
        return fringelab_settings.SCHEMA_VERSION


class HistogramSerializer(serializers.Serializer):
    """
    Monte-Carlo histogram with, per bin, the classical density 2 A^2 it
    should reproduce (null where the density is undefined).
    """
    schema_version = serializers.SerializerMethodField()
    N = serializers.IntegerField()
    m_psi = serializers.FloatField()
    phi = serializers.FloatField()
    sample_count = serializers.IntegerField()
    seed = serializers.IntegerField()
    vector_length = serializers.FloatField()
    bins = serializers.SerializerMethodField()

    def get_schema_version(self, obj):
        """The FRINGELAB SCHEMA_VERSION setting."""
        return fringelab_settings.SCHEMA_VERSION

    def get_bins(self, obj):
        """
        One row per histogram bin.

        The ``length`` context entry picks the vector length used for the
        density; bins outside the classical support get a null density.
        """
        length = self.context.get('length', 'shifted')
        bins = []
        for m, count, frequency, error in zip(obj.m_values, obj.counts, obj.frequencies,
                                              obj.standard_errors):
            try:
                density = classical_density(obj.N, obj.m_psi, float(m), obj.phi, length)
            except InvalidConfigurationError:
                density = None
            bins.append({
                'm': float(m),
                'count': int(count),
                'frequency': float(frequency),
                'standard_error': float(error),
                'density': density,
            })
        return bins


class GoldenCheckSerializer(serializers.Serializer):
    """One reference number and what was computed for it."""
    name = serializers.CharField()
    quantity = serializers.CharField()
    config = serializers.CharField(allow_null=True)
    reference = FiniteFloatField()
    computed = FiniteFloatField(allow_null=True)
    tolerance = FiniteFloatField()
    passed = serializers.BooleanField()
    known_discrepancy = serializers.BooleanField()
    note = serializers.CharField(allow_blank=True)


class GoldenSummarySerializer(serializers.Serializer):
    """The summary.json written by the reproduce-paper command."""
    schema_version = serializers.SerializerMethodField()
    total = serializers.IntegerField()
    passed = serializers.IntegerField()
    known_discrepancies = serializers.IntegerField()
    unexpected_failures = serializers.IntegerField()
    checks = GoldenCheckSerializer(many=True)
    notes = serializers.ListField(child=serializers.CharField())
    files = serializers.ListField(child=serializers.CharField())

    def get_schema_version(self, obj):
        """The FRINGELAB SCHEMA_VERSION setting."""
        return fringelab_settings.SCHEMA_VERSION

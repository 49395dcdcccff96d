from rest_framework import serializers

from embedding.embeddings import Embedding, Ratio
from embedding.exceptions import ContractViolation, InputError


class RatioField(serializers.Field):
    """Точная дробь в виде строки "a/b"; на входе допускается и целое."""

    default_error_messages = {'invalid': 'Ожидается дробь вида "a/b" или целое число.'}

    def to_representation(self, value):
        return str(Ratio(value))

    def to_internal_value(self, data):
        try:
            return Ratio.parse(data)
        except InputError:
            self.fail('invalid')


class EmbeddingSerializer(serializers.Serializer):
    """{"map": {гость: хост}, "expansion", "contraction", "distortion"}.

    Метки вершин из входных файлов передаются через context: labels (гость) и host_labels."""
    map = serializers.DictField(child=serializers.IntegerField())
    expansion = RatioField(required=False)
    contraction = RatioField(required=False)
    distortion = RatioField(required=False)

    def to_representation(self, instance):
        labels = self.context.get('labels') or list(range(instance.guest_size or len(instance)))
        host_labels = self.context.get('host_labels')
        mapping = {labels[v]: (host_labels[x] if host_labels else x) for v, x in instance.items()}
        data = {'map': {str(label): mapping[label] for label in sorted(mapping)}}
        if instance.report is not None:
            data['expansion'] = str(instance.report.expansion)
            data['contraction'] = str(instance.report.contraction)
            # при дробном d сжатие разрешено, и искажение не зависит от масштаба
            distortion = instance.report.scale_free if self.context.get('allow_contraction') else instance.report.distortion
            data['distortion'] = str(distortion)
        return data

    def validate_map(self, value):
        labels = self.context.get('labels')
        index = {label: i for i, label in enumerate(labels)} if labels is not None else None
        host_labels = self.context.get('host_labels')
        host_index = {label: i for i, label in enumerate(host_labels)} if host_labels else None
        result = {}
        for key, x in value.items():
            try:
                label = int(key)
            except ValueError:
                raise serializers.ValidationError(f'guest vertex {key!r} is not an integer')
            if index is not None and label not in index:
                raise serializers.ValidationError(f'guest vertex {label} is not in the graph')
            if host_index is not None and x not in host_index:
                raise serializers.ValidationError(f'host vertex {x} is not in the host')
            result[index[label] if index is not None else label] = host_index[x] if host_index is not None else x
        try:
            Embedding(result)
        except ContractViolation as exc:
            raise serializers.ValidationError(str(exc))
        return result

    def create(self, validated_data):
        labels = self.context.get('labels')
        return Embedding(validated_data['map'], len(labels) if labels is not None else None)


class ReportSerializer(serializers.Serializer):
    expansion = RatioField()
    contraction = RatioField()
    distortion = RatioField()
    expansion_pair = serializers.ListField(child=serializers.IntegerField(), allow_null=True)
    contraction_pair = serializers.ListField(child=serializers.IntegerField(), allow_null=True)
    non_contracting = serializers.BooleanField()

    def to_representation(self, instance):
        labels = self.context.get('labels')

        def pair(value):
            if value is None:
                return None
            return [labels[v] for v in value] if labels else list(value)

        return {
            'expansion': str(instance.expansion),
            'contraction': str(instance.contraction),
            'distortion': str(instance.distortion),
            'expansion_pair': pair(instance.expansion_pair),
            'contraction_pair': pair(instance.contraction_pair),
            'non_contracting': instance.non_contracting,
        }


class BenchRowSerializer(serializers.Serializer):
    FIELDS = ('instance', 'solver', 'verdict', 'nodes', 'millis')

    instance = serializers.CharField()
    solver = serializers.CharField()
    verdict = serializers.ChoiceField(choices=['found', 'infeasible', 'budget', 'error'])
    nodes = serializers.IntegerField(min_value=0)
    millis = serializers.IntegerField(min_value=0)

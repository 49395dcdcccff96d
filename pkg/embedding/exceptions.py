from django.core.exceptions import ValidationError


class EmbeddingError(Exception):
    pass


class InputError(ValidationError):
    """Ошибка во входных данных: файл графа, описание хоста, JSON вложения.

    line - номер строки файла (с единицы), если ошибка привязана к строке."""

    def __init__(self, message, code='invalid', line=None):
        if line is not None:
            message = f'строка {line}: {message}'
        super().__init__(message, code=code)
        self.line = line

    def __str__(self):
        return '; '.join(self.messages)


class ContractViolation(EmbeddingError):
    """Отображение не инъективно."""

    def __init__(self, u, v, image):
        super().__init__(f'vertices {u} and {v} share host vertex {image}')
        self.pair = (u, v)
        self.image = image


class PartialityError(EmbeddingError):
    def __init__(self, missing):
        missing = sorted(missing)
        super().__init__(f'embedding is not total, unmapped: {missing[:10]}')
        self.missing = missing


class ConflictError(EmbeddingError):
    def __init__(self, vertex, first, second):
        super().__init__(f'conflicting images for vertex {vertex}: {first} and {second}')
        self.vertex = vertex


class DecompositionError(EmbeddingError):
    """Нарушена аксиома древесной декомпозиции. axiom - 'cover', 'edge', 'subtree' или 'nice'."""

    def __init__(self, axiom, detail):
        super().__init__(f'{axiom}: {detail}')
        self.axiom = axiom


class BudgetExceeded(EmbeddingError):
    def __init__(self, nodes, seconds):
        super().__init__(f'search budget exceeded after {nodes} nodes, {seconds:.1f}s')
        self.nodes = nodes

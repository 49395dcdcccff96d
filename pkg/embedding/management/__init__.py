from django.core.management import execute_from_command_line


def run(argv):
    """Запуск команды manage.py; возвращает код выхода (0 - найдено, 1 - нет вложения,
    2 - ошибка входных данных, 3 - исчерпан бюджет перебора)."""
    try:
        execute_from_command_line(['manage.py', *argv])
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 1)
    return 0

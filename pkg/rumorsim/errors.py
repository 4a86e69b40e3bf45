class RumorsimError(Exception):
    pass


class ConfigurationError(RumorsimError):
    pass


class DatasetError(ConfigurationError):
    def __init__(self, path, problem, line_no=None):
        self.path = path
        self.line_no = line_no
        where = f'{path}:{line_no}' if line_no is not None else f'{path}'
        super().__init__(f'{where}: {problem}')


class NotFoundError(RumorsimError, KeyError):
    def __str__(self):
        # KeyError quotes its argument, keep the plain message
        return str(self.args[0]) if self.args else ''


class UndefinedCorrelationError(RumorsimError, ValueError):
    pass


class EmptyEvaluationError(RumorsimError):
    pass

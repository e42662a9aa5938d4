"""Exception hierarchy.  Every error carries the category of the module that raised it."""


class TtkitError(Exception):
    category = "ttkit"


class GmSyntaxError(TtkitError, ValueError):
    category = "parse"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class GraphError(TtkitError, ValueError):
    category = "graph_core"


class MapError(TtkitError, ValueError):
    category = "graph_map"


class FiltrationError(MapError):
    pass


class NotEGError(MapError):
    pass


class OuterSpaceError(TtkitError, ValueError):
    category = "outer_space"


class OverflowGuardError(OuterSpaceError):
    pass


class CtError(TtkitError, ValueError):
    category = "train_track_ct"


class LinearEdgeConflict(CtError):
    pass


class NotCompletelySplit(CtError):
    def __init__(self, message, position=None):
        self.position = position
        super().__init__(message)


class AmbiguousParse(CtError):
    pass


class NotStronglyConnected(CtError):
    def __init__(self, message, components=()):
        self.components = components
        super().__init__(message)


class InpSearchError(CtError):
    pass


class GrowthError(TtkitError, ValueError):
    category = "growth_homs"


class LabelMismatch(GrowthError):
    pass


class ConstantsUnavailable(GrowthError):
    pass

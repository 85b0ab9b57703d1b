class RefsimError(Exception):
    pass


class CapExceeded(RefsimError):
    """A configured resource cap was hit; never a logical verdict."""


class ModelError(RefsimError):
    """Invalid Kripke model.  ``problems`` lists every violation found."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems

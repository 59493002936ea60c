"""Exception hierarchy. Every domain error is a ``ValueError`` subclass."""


class NoisyRecError(ValueError):
    pass


class InvalidPrior(NoisyRecError):
    pass


class InvalidExperiment(NoisyRecError):
    pass


class UnknownSignal(NoisyRecError):
    pass


class ZeroLikelihoodSignal(NoisyRecError):
    pass


class NotBayesPlausible(NoisyRecError):
    pass


class OutOfRange(NoisyRecError):
    pass


class DegenerateMeans(NoisyRecError):
    pass


class UnpairedSignal(NoisyRecError):
    def __init__(self, labels):
        self.labels = list(labels)
        super().__init__(f"no reflected partner for signal(s): {', '.join(map(str, self.labels))}")


class SizeMismatch(InvalidExperiment):
    pass


class NotSymmetric(NoisyRecError):
    pass


class EmptyGrid(NoisyRecError):
    pass


class InvalidBins(NoisyRecError):
    pass

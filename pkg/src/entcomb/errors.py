"""Domain exception types shared across the package."""


class EntcombError(Exception):
    """Base class for every domain error raised by entcomb."""


class InvalidInput(EntcombError):
    """Malformed file or payload (bad schema, non-finite numbers)."""


class DimensionMismatch(EntcombError):
    """Vector or layout sizes do not line up."""


class NotNormalized(EntcombError):
    """State amplitudes do not have unit norm."""


class UnsupportedKind(EntcombError):
    """Unknown standard-state family or invalid parameters for it."""


class EmptySubset(EntcombError):
    """A party subset that must be nonempty is empty."""


class FullSubset(EntcombError):
    """A party subset that must be proper covers every party."""


class InvalidSubset(EntcombError):
    """Subset bitmask outside the valid range or inconsistent with its use."""


class NotDensityMatrix(EntcombError):
    """Matrix fails the Hermitian / unit-trace / positivity checks."""


class BadPermutation(EntcombError):
    """Sequence is not a permutation of 1..m."""


class TableInvalid(EntcombError):
    """Entropy table failed a consistency check that is a theorem."""


class PointOutsideRegion(EntcombError):
    """Requested decomposition target is not a member of the region."""


class NotAmplifying(EntcombError):
    """Amplification ratio is at most one; the round schedule cannot run."""


class ZeroBorrow(EntcombError):
    """No party borrows, so the round schedule degenerates.

    Carries ``produced_rates`` (per-party single-round output rates) so a
    caller can still report what one borrow-free round yields.
    """

    def __init__(self, message, produced_rates=None):
        super().__init__(message)
        self.produced_rates = produced_rates


class ZeroTarget(EntcombError):
    """Target state carries no entanglement across any relevant cut."""


class PartyMismatch(EntcombError):
    """Source and target states do not have the same number of parties."""

import itertools
import random
from typing import Any, Iterable, List, Optional, Tuple

from layerlat.conf import get_setting


class SamplingMixin:
    """
    Seeded sampling shared by every checker that has to fall back on samples
    when a carrier is infinite. Finite populations small enough are covered
    exhaustively and reported as such.
    """

    samples: Optional[int] = None
    seed: Optional[int] = None
    window: Optional[int] = None

    def get_samples(self) -> int:
        if self.samples is not None:
            return self.samples
        return get_setting("LAYERLAT_SAMPLES")

    def get_seed(self) -> int:
        if self.seed is not None:
            return self.seed
        return get_setting("LAYERLAT_SEED")

    def get_window(self) -> int:
        if self.window is not None:
            return self.window
        return get_setting("LAYERLAT_SAMPLE_WINDOW")

    def get_rng(self) -> random.Random:
        if not hasattr(self, "_rng"):
            self._rng = random.Random(self.get_seed())
        return self._rng

    def prefix(self, stream: Iterable[Any], count: Optional[int] = None) -> List[Any]:
        """
        First `count` elements of an enumeration stream
        """
        return list(itertools.islice(stream, count or self.get_samples()))

    def sample_tuples(
        self,
        population: List[Any],
        arity: int,
        count: Optional[int] = None,
    ) -> Tuple[List[Tuple[Any, ...]], bool]:
        """
        Return `count` tuples drawn from the population and whether they
        cover every tuple (exhaustive)
        """
        count = count or self.get_samples()
        if not population:
            return [], True
        if len(population) ** arity <= count:
            return list(itertools.product(population, repeat=arity)), True
        rng = self.get_rng()
        return [
            tuple(rng.choice(population) for _ in range(arity)) for _ in range(count)
        ], False

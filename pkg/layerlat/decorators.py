from functools import wraps
from typing import Callable

from layerlat.exceptions import EvenTypeUnsupported, Unbounded


def odd_chain_required(func: Callable) -> Callable:
    """
    This decorator rejects chains whose bunch is not of the odd type before
    the wrapped construction runs. The chain is the first argument.
    """

    @wraps(func)
    def _wrap(chain, *args, **kwargs):
        chain_type = chain.chain_type()
        if not chain_type.is_odd:
            raise EvenTypeUnsupported(
                f"only odd chains can be densified, this one is {chain_type.value}"
            )
        return func(chain, *args, **kwargs)

    return _wrap


def bounded_chain_required(func: Callable) -> Callable:
    """
    This decorator rejects chains without a top and a bottom element. The
    boundedness result is passed on to the wrapped function as `bounds`.
    """

    @wraps(func)
    def _wrap(chain, *args, **kwargs):
        bounds = chain.is_bounded()
        if not bounds:
            raise Unbounded(f"{chain.bunch} has no top and bottom elements")
        return func(chain, *args, bounds=bounds, **kwargs)

    return _wrap

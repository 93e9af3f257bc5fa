import asyncio
from typing import Awaitable, Callable, List, Optional, Sequence, TypeVar

from loguru import logger

ItemType = TypeVar("ItemType")
ResultType = TypeVar("ResultType")

tasks_registry: List[asyncio.Task] = []


def asyncio_create_task(
    *args,
    **kwargs,
) -> asyncio.Task:
    task = asyncio.create_task(*args, **kwargs)
    tasks_registry.append(task)
    task.add_done_callback(lambda t: tasks_registry.remove(t))
    return task


async def gather_in_threads(
    fn: Callable[[ItemType], ResultType],
    items: Sequence[ItemType],
    max_concurrency: Optional[int] = None,
) -> List[ResultType]:
    """Runs `fn` over `items` in worker threads; results come back in input order."""
    semaphore = asyncio.Semaphore(max_concurrency or max(len(items), 1))

    async def run_one(index: int, item: ItemType) -> ResultType:
        async with semaphore:
            logger.debug(f"Starting job {index + 1}/{len(items)}")
            return await asyncio.to_thread(fn, item)

    tasks = [asyncio_create_task(run_one(i, item)) for i, item in enumerate(items)]
    try:
        return list(await asyncio.gather(*tasks))
    except BaseException:
        for task in tasks:
            task.cancel()
        raise


def run_blocking(awaitable: Awaitable[ResultType]) -> ResultType:
    return asyncio.run(awaitable)  # type: ignore[arg-type]


def map_in_threads(
    fn: Callable[[ItemType], ResultType],
    items: Sequence[ItemType],
    max_concurrency: Optional[int] = None,
) -> List[ResultType]:
    return run_blocking(gather_in_threads(fn, items, max_concurrency=max_concurrency))

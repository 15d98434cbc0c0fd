#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace zeno::detail
{

/// Calls fn(i) for i in [0, count) on a pool of worker threads. Each index
/// runs exactly once; callers write results into slot i, so the outcome does
/// not depend on scheduling. If any call throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
	const std::size_t workers =
		std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
	if(workers <= 1)
	{
		for(std::size_t i = 0; i < count; ++i)
		{
			fn(i);
		}
		return;
	}
	std::atomic<std::size_t> next{0};
	std::vector<std::exception_ptr> errors(count);
	{
		std::vector<std::jthread> pool;
		pool.reserve(workers);
		for(std::size_t w = 0; w < workers; ++w)
		{
			pool.emplace_back([&] {
				for(std::size_t i = next++; i < count; i = next++)
				{
					try
					{
						fn(i);
					}
					catch(...)
					{
						errors[i] = std::current_exception();
					}
				}
			});
		}
	}
	for(const auto& e : errors)
	{
		if(e)
		{
			std::rethrow_exception(e);
		}
	}
}

} // namespace zeno::detail

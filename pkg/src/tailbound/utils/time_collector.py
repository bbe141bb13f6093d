from collections import defaultdict
from typing import Dict, List, Optional

import numpy as np

from tailbound.middleware import get_middleware


class TimeCollector:
    times: Dict[str, List[float]] = defaultdict(list)
    separator = ';'

    def add_time(self, function_name: str, time: float):
        self.times[function_name].append(time)

    def reset(self):
        self.times.clear()

    def lines(self, filter: Optional[str] = None) -> List[str]:
        result = [self.separator.join(['function', 'calls', 'avg', 'std', 'total'])]
        for name, times in sorted(self.times.items()):
            if filter is not None and filter not in name:
                continue
            result.append(self.separator.join([name,
                                               str(len(times)),
                                               f'{np.average(times):.6f}',
                                               f'{np.std(times):.6f}',
                                               f'{np.sum(times):.6f}']))
        return result

    def pretty_print(self, filter: Optional[str] = None):
        get_middleware().loginfo('-------------------------------------------------')
        for line in self.lines(filter):
            get_middleware().loginfo(line)
        get_middleware().loginfo('-------------------------------------------------')


time_collector = TimeCollector()

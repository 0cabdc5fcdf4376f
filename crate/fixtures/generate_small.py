"""Writes the small CSV fixture in fixtures/small: six summer days of
day-ahead and intraday prices, 10-minute wind speed and irradiance, and
grid emission factors. Values are synthetic and seeded."""

import math
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

OUT = Path(__file__).parent / "small"
TZ = timezone(timedelta(hours=2))
START = datetime(2022, 6, 1, tzinfo=TZ)
DAYS = 6


def stamps(step_minutes):
    n = DAYS * 24 * 60 // step_minutes
    return [START + timedelta(minutes=k * step_minutes) for k in range(n)]


def write(name, unit, rows):
    lines = [f"# unit: {unit}", "timestamp,value"]
    lines += [f"{t.isoformat()},{v:.4f}" for t, v in rows]
    (OUT / name).write_text("\n".join(lines) + "\n")


def main():
    rng = random.Random(20220601)
    OUT.mkdir(exist_ok=True)
    day_wind = [rng.uniform(2.0, 8.0) for _ in range(DAYS)]
    day_clear = [rng.uniform(0.3, 1.0) for _ in range(DAYS)]

    def hour(t):
        return t.hour + t.minute / 60

    def day(t):
        return (t - START).days

    wind = []
    for t in stamps(10):
        v = day_wind[day(t)] * (1 + 0.3 * math.sin(2 * math.pi * (hour(t) - 3) / 24)) + rng.gauss(0, 0.4)
        wind.append((t, max(v, 0.0)))
    irr = []
    for t in stamps(10):
        x = (hour(t) - 13.5) / 8.0
        g = day_clear[day(t)] * math.cos(x * math.pi / 2) ** 1.5 if abs(x) < 1 else 0.0
        irr.append((t, max(g + (rng.gauss(0, 0.02) if g > 0 else 0.0), 0.0)))

    da = []
    for t in stamps(60):
        d = day(t)
        solar = day_clear[d] * max(math.cos((hour(t) - 13.5) / 8 * math.pi / 2), 0.0)
        price = 160 + 60 * math.sin(2 * math.pi * (hour(t) - 13) / 24) - 80 * solar - 6 * day_wind[d]
        da.append((t, price + rng.gauss(0, 8)))
    id_ = []
    for t in stamps(15):
        base = da[day(t) * 24 + t.hour][1]
        id_.append((t, base + rng.gauss(0, 15)))
    gwi = []
    for t in stamps(15):
        d = day(t)
        solar = day_clear[d] * max(math.cos((hour(t) - 13.5) / 8 * math.pi / 2), 0.0)
        gwi.append((t, 620 - 180 * solar - 15 * day_wind[d] + rng.gauss(0, 10)))

    write("da_price.csv", "EUR/MWh", da)
    write("id_price.csv", "EUR/MWh", id_)
    write("wind_speed.csv", "m/s", wind)
    write("irradiance.csv", "kW/m2", irr)
    write("gwi.csv", "kgCO2/MWh", gwi)


if __name__ == "__main__":
    main()

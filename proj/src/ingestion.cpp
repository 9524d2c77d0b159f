#include "wmr/ingestion.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wmr {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

[[noreturn]] void structural_error(const std::string& origin, int line, const std::string& what) {
    throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::int64_t parse_int(const std::string& s, const std::string& origin, int line) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        structural_error(origin, line, "bad integer '" + s + "'");
    return v;
}

} // namespace

BarParseResult parse_bar_csv(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    return parse_bar_csv(in, path.string());
}

BarParseResult parse_bar_csv(std::istream& in, const std::string& origin) {
    BarParseResult result;
    std::string line;
    int line_no = 0;
    bool utc_times = false;
    bool saw_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);

        if (!saw_header) {
            saw_header = true;
            if (fields.size() < 6 || fields[0] != "date" || fields[1] != "time")
                structural_error(origin, line_no, "expected header date,time,open,high,low,close");
            if (fields.size() == 7 && fields[6] == "tz=UTC")
                utc_times = true;
            else if (fields.size() != 6)
                structural_error(origin, line_no, "unexpected header field count");
            continue;
        }

        if (fields.size() != 6) structural_error(origin, line_no, "expected 6 fields");
        Date date;
        int minute;
        Price open, high, low, close;
        try {
            date = parse_date(fields[0]);
            minute = parse_hhmm(fields[1]);
            open = parse_price(fields[2]);
            high = parse_price(fields[3]);
            low = parse_price(fields[4]);
            close = parse_price(fields[5]);
        } catch (const std::invalid_argument& e) {
            structural_error(origin, line_no, e.what());
        }

        if (utc_times) {
            minute += london_offset(date) * 60;
            if (minute >= kMinutesPerDay) {
                minute -= kMinutesPerDay;
                date = add_days(date, 1);
            }
        }

        MinuteBar bar{date, minute, open, high, low, close};
        if (!bar.valid()) {
            result.issues.push_back(
                {line_no, "line " + std::to_string(line_no) + ": invalid bar (" + line + ")"});
            continue;
        }
        result.days[date][minute] = bar;
    }
    return result;
}

Dataset filter_complete_days(const RawDayMap& raw, std::string pair) {
    Dataset ds;
    ds.pair = std::move(pair);
    for (const auto& [date, minutes] : raw) {
        if (minutes.empty()) continue; // empty weekend placeholders
        if (static_cast<int>(minutes.size()) != kMinutesPerDay) {
            ++ds.excluded_days;
            continue;
        }
        DayBars day;
        day.date = date;
        day.bars.reserve(kMinutesPerDay);
        bool contiguous = true;
        int expect = 0;
        for (const auto& [minute, bar] : minutes) {
            if (minute != expect++) {
                contiguous = false;
                break;
            }
            day.bars.push_back(bar);
        }
        if (!contiguous) {
            ++ds.excluded_days;
            continue;
        }
        ds.days.push_back(std::move(day));
    }
    return ds;
}

std::pair<Dataset, Dataset> split_periods(const Dataset& dataset) {
    const Date boundary{2013, 6, 1};
    Dataset pre, post;
    pre.pair = post.pair = dataset.pair;
    pre.period = PeriodTag::pre_2013_06;
    post.period = PeriodTag::post_2013_06;
    for (const auto& day : dataset.days)
        (day.date < boundary ? pre : post).days.push_back(day);
    return {std::move(pre), std::move(post)};
}

void write_bar_csv(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    write_bar_csv(out, dataset);
}

void write_bar_csv(std::ostream& out, const Dataset& dataset) {
    out << "date,time,open,high,low,close\n";
    for (const auto& day : dataset.days) {
        const std::string date = format_date(day.date);
        for (const auto& bar : day.bars) {
            out << date << ',' << format_hhmm(bar.minute) << ',' << format_price(bar.open) << ','
                << format_price(bar.high) << ',' << format_price(bar.low) << ','
                << format_price(bar.close) << '\n';
        }
    }
}

std::vector<TickEvent> parse_tick_csv(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    return parse_tick_csv(in, path.string());
}

std::vector<TickEvent> parse_tick_csv(std::istream& in, const std::string& origin) {
    std::vector<TickEvent> ticks;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (!saw_header) {
            saw_header = true;
            if (fields.size() != 6 || fields[0] != "timestamp_ms" || fields[1] != "kind")
                structural_error(origin, line_no,
                                 "expected header timestamp_ms,kind,bid,ask,price,source");
            continue;
        }
        if (fields.size() != 6) structural_error(origin, line_no, "expected 6 fields");
        const TimestampMs ts = parse_int(fields[0], origin, line_no);
        try {
            if (fields[1] == "Q") {
                ticks.emplace_back(Quote{ts, parse_price(fields[2]), parse_price(fields[3]),
                                         fields[5]});
            } else if (fields[1] == "T") {
                ticks.emplace_back(Trade{ts, parse_price(fields[4]), fields[5]});
            } else {
                structural_error(origin, line_no, "kind must be Q or T");
            }
        } catch (const std::invalid_argument& e) {
            structural_error(origin, line_no, e.what());
        }
    }
    return ticks;
}

void write_tick_csv(const std::filesystem::path& path, std::span<const TickEvent> ticks) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    write_tick_csv(out, ticks);
}

void write_tick_csv(std::ostream& out, std::span<const TickEvent> ticks) {
    out << "timestamp_ms,kind,bid,ask,price,source\n";
    for (const auto& e : ticks) {
        if (const Quote* q = std::get_if<Quote>(&e)) {
            out << q->ts << ",Q," << format_price(q->bid) << ',' << format_price(q->ask) << ",,"
                << q->source << '\n';
        } else {
            const Trade& t = std::get<Trade>(e);
            out << t.ts << ",T,,," << format_price(t.price) << ',' << t.source << '\n';
        }
    }
}

std::map<Date, double> parse_daily_returns_csv(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::map<Date, double> out;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (!saw_header) {
            saw_header = true;
            if (fields.size() != 2 || fields[0] != "date")
                structural_error(path.string(), line_no, "expected header date,return");
            continue;
        }
        if (fields.size() != 2) structural_error(path.string(), line_no, "expected 2 fields");
        try {
            out[parse_date(fields[0])] = std::stod(fields[1]);
        } catch (const std::exception& e) {
            structural_error(path.string(), line_no, e.what());
        }
    }
    return out;
}

} // namespace wmr
